#pragma once

// Independent reference computations for the unit and acceptance tests. Nothing
// here calls into the library's statistical code paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// Rank by counting: rank(x_i) = #{x_j < x_i} + (#{x_j == x_i} + 1) / 2.
inline std::vector<double> naive_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) less += 1;
      if (v == x[i]) equal += 1;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

// Pearson straight from the definition with long double accumulation.
inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const long double mx = sx / n, my = sy / n;
  long double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(cxy / std::sqrt(cxx * cyy));
}

inline double naive_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return naive_pearson(naive_ranks(x), naive_ranks(y));
}

inline std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

// Exact max-statistic p-values by enumerating every row permutation.
struct ExactPermutation {
  Eigen::MatrixXd p_uncorr, p_corr;
};

inline ExactPermutation enumerate_permutations(const Eigen::MatrixXd& f, const Eigen::MatrixXd& t) {
  const auto n = static_cast<std::size_t>(f.rows());
  const Eigen::Index p = f.cols(), q = t.cols();
  Eigen::MatrixXd obs(p, q);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = 0; k < q; ++k) obs(j, k) = std::abs(naive_spearman(column(f, j), column(t, k)));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::MatrixXd own = Eigen::MatrixXd::Zero(p, q), fam = Eigen::MatrixXd::Zero(p, q);
  double count = 0;
  do {
    Eigen::MatrixXd a(p, q);
    for (Eigen::Index k = 0; k < q; ++k) {
      std::vector<double> tk(n);
      for (std::size_t i = 0; i < n; ++i) tk[i] = t(static_cast<Eigen::Index>(perm[i]), k);
      for (Eigen::Index j = 0; j < p; ++j) a(j, k) = std::abs(naive_spearman(column(f, j), tk));
    }
    const double mx = a.maxCoeff();
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < q; ++k) {
        if (a(j, k) >= obs(j, k) - 1e-12) own(j, k) += 1;
        if (mx >= obs(j, k) - 1e-12) fam(j, k) += 1;
      }
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {own / count, fam / count};
}

// OLS on z-scored (population SD) data via the normal equations.
inline Eigen::VectorXd standardized_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd z = x.rowwise() - x.colwise().mean();
  for (Eigen::Index c = 0; c < z.cols(); ++c) z.col(c) /= std::sqrt(z.col(c).squaredNorm() / n);
  Eigen::VectorXd w = y.array() - y.mean();
  w /= std::sqrt(w.squaredNorm() / n);
  return (z.transpose() * z).ldlt().solve(z.transpose() * w);
}

// Brute-force lexicon matching: test every entry against the token.
struct Pattern {
  std::string text;
  bool wildcard;
  std::vector<int> categories;  // category slots
};

inline std::optional<std::vector<int>> brute_match(const std::string& token, const std::vector<Pattern>& entries) {
  if (std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
  const Pattern* best = nullptr;
  for (const auto& e : entries) {
    if (!e.wildcard && e.text == token) return e.categories;
  }
  for (const auto& e : entries) {
    if (e.wildcard && token.size() >= e.text.size() && token.compare(0, e.text.size(), e.text) == 0) {
      if (!best || e.text.size() > best->text.size()) best = &e;
    }
  }
  if (best) return best->categories;
  return std::nullopt;
}

}  // namespace oracle
