#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::pls {

namespace {

std::uint64_t stability_key(std::uint64_t seed) { return rng::derive_key(seed, "pls.stability"); }

// One bootstrap replicate: sign-aligned single-component x-loadings written to
// `out`. Returns the number of redraws, or npos when the cap is exceeded.
std::size_t stability_replicate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                const Eigen::VectorXd& reference, std::uint64_t key,
                                std::size_t b, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) {
  const Eigen::Index n = x.rows();
  rng::Stream stream(key, b);
  Eigen::MatrixXd xs(n, x.cols()), ys(n, y.cols());
  for (std::size_t attempt = 0; attempt <= kMaxStabilityRedraws; ++attempt) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(stream.below(static_cast<std::uint64_t>(n)));
      xs.row(i) = x.row(k);
      ys.row(i) = y.row(k);
    }
    try {
      const PlsModel m = simpls_fit(xs, ys, 1);
      Eigen::VectorXd load = m.x_loadings.col(0);
      if (load.dot(reference) < 0) load = -load;
      out = load.transpose();
      return attempt;
    } catch (const NumericalError&) {
    } catch (const std::invalid_argument&) {
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

StabilityReport summarize(const Eigen::MatrixXd& loadings, std::size_t redraws, std::uint64_t seed) {
  StabilityReport r;
  const Eigen::Index b = loadings.rows();
  const Eigen::Index p = loadings.cols();
  r.n_boot = static_cast<std::size_t>(b);
  r.seed = seed;
  r.redraws = redraws;
  r.mean_loading = loadings.colwise().mean().transpose();
  r.sd_loading.resize(p);
  r.z_scores.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double ss = (loadings.col(j).array() - r.mean_loading(j)).square().sum();
    r.sd_loading(j) = b > 1 ? std::sqrt(ss / static_cast<double>(b - 1)) : 0.0;
    if (r.sd_loading(j) > 0) {
      r.z_scores(j) = r.mean_loading(j) / r.sd_loading(j);
    } else {
      r.z_scores(j) = r.mean_loading(j) == 0 ? 0.0
                                             : std::copysign(std::numeric_limits<double>::infinity(), r.mean_loading(j));
    }
  }
  r.ranking.resize(static_cast<std::size_t>(p));
  std::iota(r.ranking.begin(), r.ranking.end(), std::size_t{0});
  std::stable_sort(r.ranking.begin(), r.ranking.end(), [&](std::size_t a, std::size_t c) {
    return std::abs(r.z_scores(static_cast<Eigen::Index>(a))) > std::abs(r.z_scores(static_cast<Eigen::Index>(c)));
  });
  return r;
}

void check(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, std::size_t n_boot) {
  if (x.rows() != y.rows()) throw std::invalid_argument("bootstrap_stability: row mismatch");
  if (n_boot < 1) throw std::invalid_argument("n_boot must be >= 1");
}

}  // namespace

StabilityReport bootstrap_stability(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    std::size_t n_boot, std::uint64_t seed) {
  check(x, y, n_boot);
  const Eigen::VectorXd reference = simpls_fit(x, y, 1).x_loadings.col(0);
  const std::uint64_t key = stability_key(seed);
  Eigen::MatrixXd loadings(static_cast<Eigen::Index>(n_boot), x.cols());
  std::vector<std::size_t> redraws(n_boot, 0);
  std::atomic<bool> failed{false};
  const auto total = static_cast<std::ptrdiff_t>(n_boot);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < total; ++b) {
    if (failed) continue;
    const auto tries = stability_replicate(x, y, reference, key, static_cast<std::size_t>(b), loadings.row(b));
    if (tries == std::numeric_limits<std::size_t>::max()) {
      failed = true;
    } else {
      redraws[static_cast<std::size_t>(b)] = tries;
    }
  }
  if (failed) throw NumericalError("bootstrap_stability: too many degenerate resamples");
  return summarize(loadings, std::accumulate(redraws.begin(), redraws.end(), std::size_t{0}), seed);
}

namespace serial {

StabilityReport bootstrap_stability(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    std::size_t n_boot, std::uint64_t seed) {
  check(x, y, n_boot);
  const Eigen::VectorXd reference = simpls_fit(x, y, 1).x_loadings.col(0);
  const std::uint64_t key = stability_key(seed);
  Eigen::MatrixXd loadings(static_cast<Eigen::Index>(n_boot), x.cols());
  std::size_t redraws = 0;
  for (std::size_t b = 0; b < n_boot; ++b) {
    const auto tries = stability_replicate(x, y, reference, key, b, loadings.row(static_cast<Eigen::Index>(b)));
    if (tries == std::numeric_limits<std::size_t>::max()) {
      throw NumericalError("bootstrap_stability: too many degenerate resamples");
    }
    redraws += tries;
  }
  return summarize(loadings, redraws, seed);
}

}  // namespace serial

std::vector<std::size_t> top_features(const StabilityReport& stability, std::size_t m) {
  if (m > stability.ranking.size()) throw std::invalid_argument("top_features: m exceeds feature count");
  std::vector<std::size_t> top(stability.ranking.begin(), stability.ranking.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(top.begin(), top.end());
  return top;
}

}  // namespace lingstat::pls
