#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "lingstat/error.hpp"
#include "lingstat/log.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::stats {

double fisher_z(double r) {
  if (std::isnan(r)) throw NumericalError("fisher_z: NaN correlation");
  constexpr double kLimit = 1.0 - 1e-7;
  if (std::abs(r) >= 1.0) {
    log::warn("fisher_z: |r| >= 1 clamped to 1 - 1e-7");
    r = std::copysign(kLimit, r);
  }
  return std::atanh(r);
}

TTest one_sample_t(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw NumericalError("one_sample_t: fewer than 2 values");
  TTest out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(n);
  double ss = 0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(out.sd > 0)) throw NumericalError("one_sample_t: zero variance");
  out.df = static_cast<double>(n - 1);
  out.t = out.mean / (out.sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(out.df);
  out.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
  return out;
}

double t_quantile(double prob, double df) {
  const boost::math::students_t dist(df);
  return boost::math::quantile(dist, prob);
}

}  // namespace lingstat::stats
