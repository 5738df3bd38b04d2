#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::stats {

std::uint64_t permutation_key(std::uint64_t seed) { return rng::derive_key(seed, "stats.permutation"); }

std::ptrdiff_t critical_rank(std::size_t n_null, double alpha, bool exhaustive) {
  // Largest count of null maxima >= |rho| that still gives p < alpha.
  const double n = static_cast<double>(n_null);
  const double bound = exhaustive ? alpha * n : alpha * (n + 1.0) - 1.0;
  const auto k = static_cast<std::ptrdiff_t>(std::ceil(bound)) - 1;
  return std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(n_null));
}

bool PermutationReport::significant(Eigen::Index j, Eigen::Index k) const {
  return p_corr(j, k) < alpha;
}

bool PermutationReport::exceeds_critical(Eigen::Index j, Eigen::Index k) const {
  return std::abs(rho(j, k)) - kTieTolerance > critical_value;
}

namespace {

void finish_report(PermutationReport& r, const Eigen::MatrixXi& counts) {
  const double denom = r.exhaustive ? static_cast<double>(r.n_perm) : static_cast<double>(r.n_perm + 1);
  const double extra = r.exhaustive ? 0.0 : 1.0;
  std::vector<double> sorted = r.null_max_stats;
  std::sort(sorted.begin(), sorted.end());

  r.p_uncorr.resize(r.rho.rows(), r.rho.cols());
  r.p_corr.resize(r.rho.rows(), r.rho.cols());
  for (Eigen::Index j = 0; j < r.rho.rows(); ++j) {
    for (Eigen::Index k = 0; k < r.rho.cols(); ++k) {
      const double threshold = std::abs(r.rho(j, k)) - kTieTolerance;
      const auto n_ge = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), threshold);
      r.p_corr(j, k) = (extra + static_cast<double>(n_ge)) / denom;
      r.p_uncorr(j, k) = (extra + counts(j, k)) / denom;
    }
  }

  const auto rank = critical_rank(sorted.size(), r.alpha, r.exhaustive);
  if (rank < 0) {
    r.critical_value = 1.0;
  } else if (rank >= static_cast<std::ptrdiff_t>(sorted.size())) {
    r.critical_value = -1.0;
  } else {
    r.critical_value = sorted[sorted.size() - 1 - static_cast<std::size_t>(rank)];
  }
}

void append_constant_warnings(const RankedColumns& f, const RankedColumns& t,
                              std::vector<std::string>& warnings) {
  for (std::size_t j = 0; j < f.constant.size(); ++j) {
    if (f.constant[j]) warnings.push_back("feature column " + std::to_string(j) + " is constant; rho set to 0");
  }
  for (std::size_t k = 0; k < t.constant.size(); ++k) {
    if (t.constant[k]) warnings.push_back("target column " + std::to_string(k) + " is constant; rho set to 0");
  }
}

void check_inputs(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets) {
  if (features.rows() != targets.rows()) throw std::invalid_argument("permutation test: row mismatch");
  if (features.rows() < 3) throw NumericalError("permutation test: fewer than 3 rows");
}

}  // namespace

PermutationReport max_stat_permutation(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets, std::size_t n_perm,
                                       double alpha, std::uint64_t seed) {
  check_inputs(features, targets);
  if (n_perm < 1) throw std::invalid_argument("n_perm must be >= 1");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0,1)");

  const auto f = ranked_unit_columns(features);
  const auto t = ranked_unit_columns(targets);
  const Eigen::MatrixXd ft = f.values.transpose();
  const Eigen::Index n = features.rows();

  PermutationReport r;
  r.alpha = alpha;
  r.n_perm = n_perm;
  r.seed = seed;
  append_constant_warnings(f, t, r.warnings);
  r.rho = ft * t.values;
  const Eigen::MatrixXd abs_obs = r.rho.cwiseAbs().array() - kTieTolerance;
  r.null_max_stats.assign(n_perm, 0.0);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(r.rho.rows(), r.rho.cols());
  const std::uint64_t key = permutation_key(seed);
  const auto total = static_cast<std::ptrdiff_t>(n_perm);

#pragma omp parallel
  {
    Eigen::MatrixXi local = Eigen::MatrixXi::Zero(r.rho.rows(), r.rho.cols());
    Eigen::MatrixXd permuted(n, t.values.cols());
    Eigen::MatrixXd rho_perm(r.rho.rows(), r.rho.cols());
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));

#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
      rng::Stream stream(key, static_cast<std::uint64_t>(i));
      std::iota(perm.begin(), perm.end(), Eigen::Index{0});
      rng::shuffle(std::span<Eigen::Index>(perm), stream);
      for (Eigen::Index row = 0; row < n; ++row) permuted.row(row) = t.values.row(perm[static_cast<std::size_t>(row)]);
      rho_perm.noalias() = ft * permuted;
      const Eigen::MatrixXd abs_perm = rho_perm.cwiseAbs();
      r.null_max_stats[static_cast<std::size_t>(i)] = abs_perm.maxCoeff();
      local += (abs_perm.array() >= abs_obs.array()).cast<int>().matrix();
    }

#pragma omp critical
    counts += local;
  }

  finish_report(r, counts);
  return r;
}

PermutationReport max_stat_exhaustive(const Eigen::MatrixXd& features,
                                      const Eigen::MatrixXd& targets, double alpha) {
  check_inputs(features, targets);
  if (features.rows() > 8) throw std::invalid_argument("exhaustive permutation limited to n <= 8");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0,1)");

  const auto f = ranked_unit_columns(features);
  const auto t = ranked_unit_columns(targets);
  const Eigen::MatrixXd ft = f.values.transpose();
  const Eigen::Index n = features.rows();

  PermutationReport r;
  r.alpha = alpha;
  r.exhaustive = true;
  append_constant_warnings(f, t, r.warnings);
  r.rho = ft * t.values;
  const Eigen::MatrixXd abs_obs = r.rho.cwiseAbs().array() - kTieTolerance;
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(r.rho.rows(), r.rho.cols());

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Eigen::MatrixXd permuted(n, t.values.cols());
  do {
    for (Eigen::Index row = 0; row < n; ++row) permuted.row(row) = t.values.row(perm[static_cast<std::size_t>(row)]);
    const Eigen::MatrixXd abs_perm = (ft * permuted).cwiseAbs();
    r.null_max_stats.push_back(abs_perm.maxCoeff());
    counts += (abs_perm.array() >= abs_obs.array()).cast<int>().matrix();
  } while (std::next_permutation(perm.begin(), perm.end()));
  r.n_perm = r.null_max_stats.size();

  finish_report(r, counts);
  return r;
}

}  // namespace lingstat::stats
