// Serial reference vs OpenMP kernel timings on a 38 x 68 x 3 workload.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lingstat/log.hpp"
#include "lingstat/pls.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/stats.hpp"
#include "support/synthetic.hpp"

using namespace lingstat;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* kernel, double serial, double parallel, double max_diff) {
  std::printf("%-22s %10.4f %10.4f %8.2fx %12.1e\n", kernel, serial, parallel, serial / parallel, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark serial reference kernels against their OpenMP versions"};
  std::size_t n_perm = 10000, n_boot = 10000, n_stability = 1000;
  int reps = 3;
  app.add_option("--n-perm", n_perm, "Permutations");
  app.add_option("--n-boot", n_boot, "Bootstrap resamples for the correlation CI");
  app.add_option("--n-stability", n_stability, "Bootstrap resamples for loading stability");
  app.add_option("--reps", reps, "Repetitions; the best time is reported")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  log::set_level(log::Level::quiet);

  rng::Stream s(42, 0);
  const Eigen::MatrixXd x = synthetic::gaussian_matrix(38, 68, s);
  Eigen::MatrixXd y = synthetic::gaussian_matrix(38, 3, s);
  y.col(0) += 0.8 * x.col(0);
  const std::vector<double> a(x.col(0).data(), x.col(0).data() + 38);
  const std::vector<double> b(y.col(0).data(), y.col(0).data() + 38);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %10s %10s %9s %12s\n", "kernel", "serial s", "openmp s", "speedup", "max |diff|");

  stats::PermutationReport ps, pp;
  const double t_ps = best_of(reps, [&] { ps = stats::serial::max_stat_permutation(x, y, n_perm, 0.05, 7); });
  const double t_pp = best_of(reps, [&] { pp = stats::max_stat_permutation(x, y, n_perm, 0.05, 7); });
  row("permutation", t_ps, t_pp,
      std::max((ps.p_corr - pp.p_corr).cwiseAbs().maxCoeff(), std::abs(ps.critical_value - pp.critical_value)));

  stats::ConfidenceInterval cs, cp;
  const double t_cs = best_of(reps, [&] { cs = stats::serial::bootstrap_ci(a, b, n_boot, 0.95, 7); });
  const double t_cp = best_of(reps, [&] { cp = stats::bootstrap_ci(a, b, n_boot, 0.95, 7); });
  row("bootstrap ci", t_cs, t_cp, std::max(std::abs(cs.lower - cp.lower), std::abs(cs.upper - cp.upper)));

  pls::StabilityReport ss, sp;
  const double t_ss = best_of(reps, [&] { ss = pls::serial::bootstrap_stability(x, y.col(0), n_stability, 7); });
  const double t_sp = best_of(reps, [&] { sp = pls::bootstrap_stability(x, y.col(0), n_stability, 7); });
  row("loading stability", t_ss, t_sp, (ss.z_scores - sp.z_scores).cwiseAbs().maxCoeff());
  return 0;
}
