#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::stats {

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw NumericalError("pearson: fewer than 2 observations");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0 || syy <= 0) throw NumericalError("correlation undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3) throw NumericalError("spearman: fewer than 3 observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

RankedColumns ranked_unit_columns(const Eigen::MatrixXd& m) {
  RankedColumns out;
  out.values.resize(m.rows(), m.cols());
  out.constant.assign(static_cast<std::size_t>(m.cols()), false);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Eigen::VectorXd col = m.col(c);
    const auto r = average_ranks(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(r.data(), col.size());
    v.array() -= v.mean();
    const double norm = v.norm();
    // Ranks of a non-constant column differ by at least 0.5, so the norm is far from 0.
    if (norm < 1e-9) {
      out.values.col(c).setZero();
      out.constant[static_cast<std::size_t>(c)] = true;
    } else {
      out.values.col(c) = v / norm;
    }
  }
  return out;
}

Eigen::MatrixXd mass_bivariate(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                               std::vector<std::string>* warnings) {
  if (features.rows() != targets.rows()) throw std::invalid_argument("mass_bivariate: row mismatch");
  if (features.rows() < 3) throw NumericalError("mass_bivariate: fewer than 3 rows");
  const auto f = ranked_unit_columns(features);
  const auto t = ranked_unit_columns(targets);
  if (warnings) {
    for (std::size_t j = 0; j < f.constant.size(); ++j) {
      if (f.constant[j]) warnings->push_back("feature column " + std::to_string(j) + " is constant; rho set to 0");
    }
    for (std::size_t k = 0; k < t.constant.size(); ++k) {
      if (t.constant[k]) warnings->push_back("target column " + std::to_string(k) + " is constant; rho set to 0");
    }
  }
  Eigen::MatrixXd rho = f.values.transpose() * t.values;
  return rho.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace lingstat::stats
