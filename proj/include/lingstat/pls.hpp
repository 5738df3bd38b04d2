#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lingstat/stats.hpp"

namespace lingstat::pls {

// Column z-scoring with the population (divide-by-n) SD. Columns whose SD is
// zero are flagged as not retained and map to 0.
struct Scaler {
  Eigen::VectorXd means;
  Eigen::VectorXd sds;
  std::vector<bool> retained;

  static Scaler fit(const Eigen::MatrixXd& m);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& z) const;
  std::size_t n_retained() const;
};

struct PlsModel {
  int n_components = 0;
  Eigen::MatrixXd x_weights;   // p x k, scores = Z * x_weights
  Eigen::MatrixXd x_loadings;  // p x k
  Eigen::MatrixXd y_loadings;  // q x k
  Eigen::MatrixXd beta;        // p x q, standardized space
  Scaler x_scaler;
  Scaler y_scaler;
  std::vector<std::string> feature_names;
  std::vector<std::string> target_names;
  std::uint64_t seed = 0;
  std::string provenance;

  // Component scores of (raw) rows; unit mean square on the training data.
  Eigen::MatrixXd scores(const Eigen::MatrixXd& x) const;
};

// SIMPLS on z-scored data. Scores are normalized to t't = n, the first
// component's largest-|weight| feature gets a positive weight (and likewise
// for every later component). Throws std::invalid_argument when k is out of
// range and NumericalError for a constant target or a degenerate component.
PlsModel simpls_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k);
PlsModel simpls_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k,
                    const Scaler& x_scaler, const Scaler& y_scaler);

// Standardize, apply beta, undo the target scaling.
Eigen::MatrixXd predict(const PlsModel& model, const Eigen::MatrixXd& x_new);
// Same prediction routed through scores and y-loadings.
Eigen::MatrixXd predict_via_components(const PlsModel& model, const Eigen::MatrixXd& x_new);

enum class Standardization {
  per_fold,  // scalers refit on every training fold
  global,    // SDs from the full data, centering per fold
};

struct CvOptions {
  int k_max = 10;
  int folds = 5;
  std::uint64_t seed = 0;
  Standardization standardization = Standardization::per_fold;
};

struct CvCurve {
  // mse[k], k = 0..k_max (k = 0 predicts training-fold means). Squared error
  // in full-data target SD units, summed over targets, averaged over rows.
  std::vector<double> mse;
  int folds = 0;
  std::uint64_t seed = 0;
  int selected_k = 0;
  std::vector<int> fold_of_row;
  // Held-out predictions (raw target units) for each k.
  std::vector<Eigen::MatrixXd> predictions;

  double change_percent(int k) const { return 100.0 * (mse[k] - mse[0]) / mse[0]; }
};

// Largest k in the initial strictly decreasing run of mse; ties stop.
int select_components(const std::vector<double>& mse);

// Seeded fold labels: a random permutation dealt round-robin into `folds`.
std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed);

CvCurve kfold_cv(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const CvOptions& opt);

struct StabilityReport {
  Eigen::VectorXd z_scores;
  Eigen::VectorXd mean_loading;
  Eigen::VectorXd sd_loading;
  std::vector<std::size_t> ranking;  // by |z| descending, ties by index
  std::size_t n_boot = 0;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;
};

inline constexpr std::size_t kMaxStabilityRedraws = 100;

// Bootstrap z-scores of single-component x-loadings, sign-aligned to the
// full-data loading. Replicate b draws from stream (seed, b).
StabilityReport bootstrap_stability(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    std::size_t n_boot, std::uint64_t seed);

struct Prediction {
  // Per target: Pearson r between cross-validated predictions and observed.
  std::vector<double> r_cv;
  std::vector<stats::ConfidenceInterval> r_cv_ci;
  std::vector<double> r_in_sample;
  // Over all targets stacked in standardized units (equals r_cv[0] for q = 1).
  double r_pooled = 0;
  double r2_pooled = 0;
};

struct ModelRun {
  std::vector<std::size_t> features;  // column indices used
  CvCurve curve;
  int fit_k = 1;                      // max(selected_k, 1)
  PlsModel model;
  Eigen::MatrixXd cv_prediction;      // held-out predictions at fit_k
  Eigen::MatrixXd in_sample_prediction;
  Prediction prediction;

  double mse_change_selected() const { return curve.change_percent(curve.selected_k); }
  double mse_change_fit() const { return curve.change_percent(fit_k); }
};

struct PipelineOptions {
  CvOptions cv;
  std::size_t n_boot = 10000;  // CI of predicted-vs-observed r
  double level = 0.95;
  std::uint64_t seed = 0;
};

// CV curve, refit at max(selected_k, 1) and prediction summaries on the given
// feature subset (all columns when `features` is empty).
ModelRun run_model(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   std::vector<std::size_t> features, const PipelineOptions& opt,
                   const std::vector<std::string>& feature_names = {},
                   const std::vector<std::string>& target_names = {});

std::vector<std::size_t> top_features(const StabilityReport& stability, std::size_t m);

struct ReducedResult {
  StabilityReport stability;
  ModelRun full;
  ModelRun reduced;
};

// Stability selection of the top-m features, then the reduced model. The
// same routine serves single-target (m = 4) and joint three-target (m = 5) runs.
ReducedResult reduced_model(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, std::size_t m,
                            std::size_t n_boot_stability, const PipelineOptions& opt,
                            const std::vector<std::string>& feature_names = {},
                            const std::vector<std::string>& target_names = {});

inline ReducedResult combined_model(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y_all,
                                    std::size_t m, std::size_t n_boot_stability,
                                    const PipelineOptions& opt,
                                    const std::vector<std::string>& feature_names = {},
                                    const std::vector<std::string>& target_names = {}) {
  return reduced_model(x, y_all, m, n_boot_stability, opt, feature_names, target_names);
}

// Self-describing text format; round-trips every double exactly.
void write_model(std::ostream& os, const PlsModel& model);
PlsModel read_model(std::istream& is);
void save_model(const std::string& path, const PlsModel& model);
PlsModel load_model(const std::string& path);

namespace serial {

StabilityReport bootstrap_stability(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    std::size_t n_boot, std::uint64_t seed);

}  // namespace serial

}  // namespace lingstat::pls
