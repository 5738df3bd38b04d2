#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::stats::serial {

namespace {

std::vector<std::vector<double>> column_ranks(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    std::vector<double> col(m.col(c).begin(), m.col(c).end());
    out.push_back(average_ranks(col));
  }
  return out;
}

double rank_correlation_or_zero(const std::vector<double>& a, const std::vector<double>& b) {
  try {
    return pearson(a, b);
  } catch (const NumericalError&) {
    return 0.0;
  }
}

}  // namespace

PermutationReport max_stat_permutation(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets, std::size_t n_perm,
                                       double alpha, std::uint64_t seed) {
  if (features.rows() != targets.rows()) throw std::invalid_argument("permutation test: row mismatch");
  if (features.rows() < 3) throw NumericalError("permutation test: fewer than 3 rows");
  const std::size_t n = static_cast<std::size_t>(features.rows());
  const auto p = static_cast<std::size_t>(features.cols());
  const auto q = static_cast<std::size_t>(targets.cols());
  const auto fr = column_ranks(features);
  const auto tr = column_ranks(targets);

  PermutationReport r;
  r.alpha = alpha;
  r.n_perm = n_perm;
  r.seed = seed;
  r.rho.resize(features.cols(), targets.cols());
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < q; ++k) r.rho(j, k) = rank_correlation_or_zero(fr[j], tr[k]);
  }

  std::vector<std::vector<double>> perm_abs(n_perm, std::vector<double>(p * q));
  std::vector<std::size_t> perm(n);
  std::vector<double> shuffled(n);
  const std::uint64_t key = permutation_key(seed);
  for (std::size_t i = 0; i < n_perm; ++i) {
    rng::Stream stream(key, i);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng::shuffle(std::span<std::size_t>(perm), stream);
    double max_abs = 0;
    for (std::size_t k = 0; k < q; ++k) {
      for (std::size_t row = 0; row < n; ++row) shuffled[row] = tr[k][perm[row]];
      for (std::size_t j = 0; j < p; ++j) {
        const double a = std::abs(rank_correlation_or_zero(fr[j], shuffled));
        perm_abs[i][j * q + k] = a;
        max_abs = std::max(max_abs, a);
      }
    }
    r.null_max_stats.push_back(max_abs);
  }

  r.p_uncorr.resize(r.rho.rows(), r.rho.cols());
  r.p_corr.resize(r.rho.rows(), r.rho.cols());
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < q; ++k) {
      const double obs = std::abs(r.rho(j, k)) - kTieTolerance;
      std::size_t own = 0, fam = 0;
      for (std::size_t i = 0; i < n_perm; ++i) {
        if (perm_abs[i][j * q + k] >= obs) ++own;
        if (r.null_max_stats[i] >= obs) ++fam;
      }
      r.p_uncorr(j, k) = (1.0 + static_cast<double>(own)) / static_cast<double>(n_perm + 1);
      r.p_corr(j, k) = (1.0 + static_cast<double>(fam)) / static_cast<double>(n_perm + 1);
    }
  }

  std::vector<double> desc = r.null_max_stats;
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const auto rank = critical_rank(desc.size(), alpha, false);
  if (rank < 0) {
    r.critical_value = 1.0;
  } else if (rank >= static_cast<std::ptrdiff_t>(desc.size())) {
    r.critical_value = -1.0;
  } else {
    r.critical_value = desc[static_cast<std::size_t>(rank)];
  }
  return r;
}

ConfidenceInterval bootstrap_ci(std::span<const double> x, std::span<const double> y,
                                std::size_t n_boot, double level, std::uint64_t seed,
                                Correlation kind) {
  if (x.size() != y.size()) throw std::invalid_argument("bootstrap: length mismatch");
  if (x.size() < 3) throw NumericalError("bootstrap: fewer than 3 observations");
  const std::size_t n = x.size();
  const std::uint64_t key = bootstrap_key(seed);
  std::vector<double> stat;
  std::vector<double> xs(n), ys(n);
  ConfidenceInterval ci;
  for (std::size_t b = 0; b < n_boot; ++b) {
    rng::Stream stream(key, b);
    std::size_t tries = 0;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(stream.below(n));
        xs[i] = x[k];
        ys[i] = y[k];
      }
      try {
        stat.push_back(kind == Correlation::spearman ? spearman(xs, ys) : pearson(xs, ys));
        break;
      } catch (const NumericalError&) {
        ++ci.redraws;
        if (++tries > kMaxRedrawsPerReplicate) throw NumericalError("bootstrap: too many degenerate resamples");
      }
    }
  }
  std::sort(stat.begin(), stat.end());
  ci.level = level;
  ci.n_boot = n_boot;
  const double tail = (1.0 - level) / 2.0;
  ci.lower = std::clamp(quantile_sorted(stat, tail), -1.0, 1.0);
  ci.upper = std::clamp(quantile_sorted(stat, 1.0 - tail), -1.0, 1.0);
  return ci;
}

}  // namespace lingstat::stats::serial
