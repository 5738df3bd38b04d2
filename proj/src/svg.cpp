#include "lingstat/svg.hpp"

#include <fmt/format.h>

#include <fstream>

#include "lingstat/error.hpp"

namespace lingstat::svg {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_scatter(const std::string& path, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const std::string& title, const std::string& x_label, const std::string& y_label) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  constexpr double w = 400, h = 400, pad = 50;
  double lo = std::min(x.minCoeff(), y.minCoeff());
  double hi = std::max(x.maxCoeff(), y.maxCoeff());
  if (hi <= lo) hi = lo + 1;
  const double margin = 0.05 * (hi - lo);
  lo -= margin;
  hi += margin;
  auto sx = [&](double v) { return pad + (v - lo) / (hi - lo) * (w - 2 * pad); };
  auto sy = [&](double v) { return h - pad - (v - lo) / (hi - lo) * (h - 2 * pad); };

  os << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", w, h);
  os << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", pad, pad,
                    w - 2 * pad, h - 2 * pad);
  os << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"grey\" stroke-dasharray=\"4\"/>\n",
                    sx(lo), sy(lo), sx(hi), sy(hi));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    os << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"steelblue\"/>\n", sx(x(i)), sy(y(i)));
  }
  os << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", w / 2, pad / 2, xml_escape(title));
  os << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", w / 2, h - 10, xml_escape(x_label));
  os << fmt::format("<text x=\"15\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {})\">{}</text>\n", h / 2,
                    h / 2, xml_escape(y_label));
  os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{:.2f}</text>\n", pad, h - pad + 15, lo);
  os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.2f}</text>\n", w - pad, h - pad + 15, hi);
  os << "</svg>\n";
}

}  // namespace lingstat::svg
