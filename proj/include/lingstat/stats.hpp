#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lingstat::stats {

// Absolute slack when comparing a permuted statistic against an observed one,
// so mathematically tied coefficients are not split by rounding.
inline constexpr double kTieTolerance = 1e-12;

// Ranks 1..n; tied values share the mean of their rank positions.
std::vector<double> average_ranks(std::span<const double> x);

// Throws NumericalError when either input is constant or lengths differ.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

// Rank-transformed columns, centered and scaled to unit norm, so that the
// Spearman matrix is a plain inner product. Constant columns become zero.
struct RankedColumns {
  Eigen::MatrixXd values;             // n x m
  std::vector<bool> constant;         // per column
};
RankedColumns ranked_unit_columns(const Eigen::MatrixXd& m);

// p x q Spearman coefficients; constant columns give 0 and a message appended
// to `warnings` (when non-null).
Eigen::MatrixXd mass_bivariate(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                               std::vector<std::string>* warnings = nullptr);

struct PermutationReport {
  Eigen::MatrixXd rho;       // p x q
  Eigen::MatrixXd p_uncorr;  // p x q
  Eigen::MatrixXd p_corr;    // p x q
  double critical_value = 0;
  double alpha = 0.05;
  std::vector<double> null_max_stats;  // one per permutation, replicate order
  std::size_t n_perm = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::vector<std::string> warnings;

  // p_corr < alpha. Always agrees with exceeds_critical().
  bool significant(Eigen::Index j, Eigen::Index k) const;
  bool exceeds_critical(Eigen::Index j, Eigen::Index k) const;
};

// Max-|rho| permutation test. Replicate i permutes the target rows jointly
// using random stream (seed, i); results do not depend on the thread count.
PermutationReport max_stat_permutation(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets, std::size_t n_perm,
                                       double alpha, std::uint64_t seed);

// Exact version over all n! row permutations (n <= 8). p-values are
// #{perm : stat >= observed} / n!, the identity included.
PermutationReport max_stat_exhaustive(const Eigen::MatrixXd& features,
                                      const Eigen::MatrixXd& targets, double alpha);

struct ConfidenceInterval {
  double lower = 0;
  double upper = 0;
  double level = 0.95;
  std::size_t n_boot = 0;
  std::size_t redraws = 0;
};

enum class Correlation { spearman, pearson };

inline constexpr std::size_t kMaxRedrawsPerReplicate = 100;

// Paired percentile bootstrap. Resamples where the coefficient is undefined are
// redrawn from the same replicate stream; NumericalError once a replicate needs
// more than kMaxRedrawsPerReplicate redraws.
ConfidenceInterval bootstrap_ci(std::span<const double> x, std::span<const double> y,
                                std::size_t n_boot, double level, std::uint64_t seed,
                                Correlation kind = Correlation::spearman);

inline ConfidenceInterval bootstrap_rho_ci(std::span<const double> x, std::span<const double> y,
                                           std::size_t n_boot, double level,
                                           std::uint64_t seed) {
  return bootstrap_ci(x, y, n_boot, level, seed, Correlation::spearman);
}

// Stream key shared by the kernels and their serial references.
std::uint64_t permutation_key(std::uint64_t seed);
std::uint64_t bootstrap_key(std::uint64_t seed);

// Type-7 (linear interpolation) quantile of ascending-sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

// Index of the family-wise critical value in descending-sorted null maxima,
// or -1 when no comparison can reach significance.
std::ptrdiff_t critical_rank(std::size_t n_null, double alpha, bool exhaustive);

// atanh(r). |r| >= 1 is clamped to +-(1 - 1e-7) with a warning.
double fisher_z(double r);

struct TTest {
  double t = 0;
  double df = 0;
  double p_two_sided = 1;
  double mean = 0;
  double sd = 0;
};

// Throws NumericalError for fewer than 2 values or zero variance.
TTest one_sample_t(std::span<const double> values);

// Inverse CDF of Student's t.
double t_quantile(double prob, double df);

namespace serial {

// Single-threaded references for the OpenMP kernels above. Same random streams,
// plain loops, no shared machinery beyond ranking.
PermutationReport max_stat_permutation(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets, std::size_t n_perm,
                                       double alpha, std::uint64_t seed);

ConfidenceInterval bootstrap_ci(std::span<const double> x, std::span<const double> y,
                                std::size_t n_boot, double level, std::uint64_t seed,
                                Correlation kind = Correlation::spearman);

}  // namespace serial

}  // namespace lingstat::stats
