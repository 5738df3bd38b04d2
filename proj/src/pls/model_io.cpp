#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lingstat/error.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::pls {

namespace {

constexpr std::string_view kMagic = "lingstat-pls-model";
constexpr int kVersion = 1;

void write_matrix(std::ostream& os, std::string_view name, const Eigen::MatrixXd& m) {
  os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "\t" : "") << fmt::format("{}", m(i, j));
    os << '\n';
  }
}

std::string next_line(std::istream& is, std::string_view expect_prefix) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!expect_prefix.empty() && !line.starts_with(expect_prefix)) {
      throw ConfigError("model file: expected '" + std::string(expect_prefix) + "', found '" + line + "'");
    }
    return line;
  }
  throw ConfigError("model file: unexpected end of file (expected '" + std::string(expect_prefix) + "')");
}

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(field);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("model file: bad number '" + s + "'");
  return v;
}

Eigen::MatrixXd read_matrix(std::istream& is, std::string_view name) {
  std::istringstream head(next_line(is, name));
  std::string tag;
  Eigen::Index rows = 0, cols = 0;
  head >> tag >> rows >> cols;
  if (tag != name || rows < 0 || cols < 0) throw ConfigError("model file: bad header for " + std::string(name));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto f = split_tab(next_line(is, ""));
    if (static_cast<Eigen::Index>(f.size()) != cols) throw ConfigError("model file: ragged row in " + std::string(name));
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = to_double(f[static_cast<std::size_t>(j)]);
  }
  return m;
}

void write_scaler_rows(std::ostream& os, const std::vector<std::string>& names, const Scaler& s) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    os << names[i] << '\t' << fmt::format("{}", s.means(e)) << '\t' << fmt::format("{}", s.sds(e)) << '\t'
       << (s.retained[i] ? 1 : 0) << '\n';
  }
}

void read_scaler_rows(std::istream& is, std::size_t count, std::vector<std::string>& names, Scaler& s) {
  s.means.resize(static_cast<Eigen::Index>(count));
  s.sds.resize(static_cast<Eigen::Index>(count));
  s.retained.assign(count, true);
  for (std::size_t i = 0; i < count; ++i) {
    const auto f = split_tab(next_line(is, ""));
    if (f.size() != 4) throw ConfigError("model file: expected name, mean, sd, retained");
    names.push_back(f[0]);
    s.means(static_cast<Eigen::Index>(i)) = to_double(f[1]);
    s.sds(static_cast<Eigen::Index>(i)) = to_double(f[2]);
    s.retained[i] = f[3] == "1";
  }
}

}  // namespace

void write_model(std::ostream& os, const PlsModel& m) {
  os << kMagic << ' ' << kVersion << '\n';
  os << "# standardized-space PLS model; rows: name, mean, sd, retained\n";
  os << "seed " << m.seed << '\n';
  os << "provenance " << m.provenance << '\n';
  os << "components " << m.n_components << '\n';
  os << "features " << m.feature_names.size() << '\n';
  write_scaler_rows(os, m.feature_names, m.x_scaler);
  os << "targets " << m.target_names.size() << '\n';
  write_scaler_rows(os, m.target_names, m.y_scaler);
  write_matrix(os, "x_weights", m.x_weights);
  write_matrix(os, "x_loadings", m.x_loadings);
  write_matrix(os, "y_loadings", m.y_loadings);
  write_matrix(os, "beta", m.beta);
}

PlsModel read_model(std::istream& is) {
  PlsModel m;
  {
    std::istringstream head(next_line(is, kMagic));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic || version != kVersion) throw ConfigError("model file: unsupported format");
  }
  m.seed = std::stoull(next_line(is, "seed ").substr(5));
  const auto prov = next_line(is, "provenance");
  m.provenance = prov.size() > 11 ? prov.substr(11) : "";
  m.n_components = std::stoi(next_line(is, "components ").substr(11));
  const auto p = std::stoul(next_line(is, "features ").substr(9));
  read_scaler_rows(is, p, m.feature_names, m.x_scaler);
  const auto q = std::stoul(next_line(is, "targets ").substr(8));
  read_scaler_rows(is, q, m.target_names, m.y_scaler);
  m.x_weights = read_matrix(is, "x_weights");
  m.x_loadings = read_matrix(is, "x_loadings");
  m.y_loadings = read_matrix(is, "y_loadings");
  m.beta = read_matrix(is, "beta");
  const auto pe = static_cast<Eigen::Index>(p), qe = static_cast<Eigen::Index>(q);
  if (m.beta.rows() != pe || m.beta.cols() != qe || m.x_weights.rows() != pe ||
      m.x_weights.cols() != m.n_components || m.y_loadings.rows() != qe) {
    throw ConfigError("model file: matrix dimensions disagree with header");
  }
  return m;
}

void save_model(const std::string& path, const PlsModel& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  write_model(os, model);
}

PlsModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  return read_model(is);
}

}  // namespace lingstat::pls
