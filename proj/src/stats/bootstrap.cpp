#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::stats {

std::uint64_t bootstrap_key(std::uint64_t seed) { return rng::derive_key(seed, "stats.bootstrap"); }

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

void check(std::span<const double> x, std::span<const double> y, std::size_t n_boot, double level) {
  if (x.size() != y.size()) throw std::invalid_argument("bootstrap: length mismatch");
  if (x.size() < 3) throw NumericalError("bootstrap: fewer than 3 observations");
  if (n_boot < 1) throw std::invalid_argument("n_boot must be >= 1");
  if (!(level > 0 && level < 1)) throw std::invalid_argument("level must lie in (0,1)");
}

// Indices sorted by value plus the start of each run of equal values.
struct TieGroups {
  std::vector<std::size_t> order;
  std::vector<std::size_t> starts;  // trailing sentinel = n

  explicit TieGroups(std::span<const double> v) : order(v.size()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || v[order[i]] != v[order[i - 1]]) starts.push_back(i);
    }
    starts.push_back(order.size());
  }
};

// Values seen by a resample with multiplicities `counts`: average ranks within
// the resample (spearman) or the raw values (pearson). Returns the number of
// distinct values drawn.
std::size_t resample_values(const TieGroups& g, std::span<const double> raw, std::span<const std::uint32_t> counts,
                            Correlation kind, std::vector<double>& out) {
  std::size_t distinct = 0;
  double pos = 0;
  for (std::size_t t = 0; t + 1 < g.starts.size(); ++t) {
    std::uint32_t m = 0;
    for (std::size_t i = g.starts[t]; i < g.starts[t + 1]; ++i) m += counts[g.order[i]];
    if (m == 0) continue;
    ++distinct;
    const double rank = pos + (static_cast<double>(m) + 1.0) / 2.0;
    pos += m;
    for (std::size_t i = g.starts[t]; i < g.starts[t + 1]; ++i) {
      const auto k = g.order[i];
      out[k] = kind == Correlation::spearman ? rank : raw[k];
    }
  }
  return distinct;
}

double weighted_pearson(std::span<const double> a, std::span<const double> b, std::span<const std::uint32_t> counts) {
  double n = 0, ma = 0, mb = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!counts[i]) continue;
    n += counts[i];
    ma += counts[i] * a[i];
    mb += counts[i] * b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!counts[i]) continue;
    const double da = a[i] - ma, db = b[i] - mb;
    sab += counts[i] * da * db;
    saa += counts[i] * da * da;
    sbb += counts[i] * db * db;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

// Each replicate draws n indices from its own stream; the resample is held as
// per-observation counts, so ranking it is a linear walk over the presorted data.
ConfidenceInterval bootstrap_ci(std::span<const double> x, std::span<const double> y,
                                std::size_t n_boot, double level, std::uint64_t seed,
                                Correlation kind) {
  check(x, y, n_boot, level);
  const std::size_t n = x.size();
  const std::uint64_t key = bootstrap_key(seed);
  const TieGroups gx(x), gy(y);
  std::vector<double> stat(n_boot);
  std::vector<std::size_t> redraws(n_boot, 0);
  std::atomic<bool> failed{false};
  const auto total = static_cast<std::ptrdiff_t>(n_boot);

#pragma omp parallel
  {
    std::vector<std::uint32_t> counts(n);
    std::vector<double> vx(n), vy(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < total; ++b) {
      if (failed) continue;
      rng::Stream stream(key, static_cast<std::uint64_t>(b));
      const auto idx = static_cast<std::size_t>(b);
      while (true) {
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::size_t i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(stream.below(n))];
        const auto dx = resample_values(gx, x, counts, kind, vx);
        const auto dy = resample_values(gy, y, counts, kind, vy);
        if (dx > 1 && dy > 1) {
          stat[idx] = weighted_pearson(vx, vy, counts);
          break;
        }
        if (++redraws[idx] > kMaxRedrawsPerReplicate) {
          failed = true;
          break;
        }
      }
    }
  }
  if (failed) throw NumericalError("bootstrap: too many degenerate resamples");

  std::sort(stat.begin(), stat.end());
  ConfidenceInterval ci;
  ci.level = level;
  ci.n_boot = n_boot;
  for (auto r : redraws) ci.redraws += r;
  const double tail = (1.0 - level) / 2.0;
  ci.lower = std::clamp(quantile_sorted(stat, tail), -1.0, 1.0);
  ci.upper = std::clamp(quantile_sorted(stat, 1.0 - tail), -1.0, 1.0);
  return ci;
}

}  // namespace lingstat::stats
