#include <cmath>
#include <limits>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::pls {

namespace {

Eigen::MatrixXd take_columns(const Eigen::MatrixXd& m, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
  return out;
}

double pearson_or_nan(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  try {
    return stats::pearson(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                          std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

ModelRun run_model(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   std::vector<std::size_t> features, const PipelineOptions& opt,
                   const std::vector<std::string>& feature_names,
                   const std::vector<std::string>& target_names) {
  if (features.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) features.push_back(static_cast<std::size_t>(j));
  }
  for (auto j : features) {
    if (j >= static_cast<std::size_t>(x.cols())) throw std::invalid_argument("run_model: feature index out of range");
  }
  ModelRun run;
  run.features = features;
  const Eigen::MatrixXd xs = take_columns(x, features);
  run.curve = kfold_cv(xs, y, opt.cv);
  run.fit_k = std::min<int>(std::max(run.curve.selected_k, 1), static_cast<int>(run.curve.mse.size()) - 1);
  if (run.fit_k < 1) throw NumericalError("run_model: no component can be fitted");

  run.model = simpls_fit(xs, y, run.fit_k);
  run.model.seed = opt.seed;
  for (auto j : features) {
    run.model.feature_names.push_back(j < feature_names.size() ? feature_names[j] : "f" + std::to_string(j));
  }
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    run.model.target_names.push_back(kk < target_names.size() ? target_names[kk] : "y" + std::to_string(k));
  }
  run.model.provenance = "folds=" + std::to_string(opt.cv.folds) + " cv_seed=" + std::to_string(opt.cv.seed) +
                         " selected_k=" + std::to_string(run.curve.selected_k) +
                         " standardization=" +
                         (opt.cv.standardization == Standardization::per_fold ? "per_fold" : "global");

  run.cv_prediction = run.curve.predictions[static_cast<std::size_t>(run.fit_k)];
  run.in_sample_prediction = predict(run.model, xs);

  const Scaler ys = Scaler::fit(y);
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    const Eigen::VectorXd obs = y.col(k);
    const Eigen::VectorXd cv = run.cv_prediction.col(k);
    run.prediction.r_cv.push_back(pearson_or_nan(cv, obs));
    run.prediction.r_in_sample.push_back(pearson_or_nan(run.in_sample_prediction.col(k), obs));
    stats::ConfidenceInterval ci;
    ci.level = opt.level;
    ci.lower = ci.upper = std::numeric_limits<double>::quiet_NaN();
    if (!std::isnan(run.prediction.r_cv.back())) {
      try {
        ci = stats::bootstrap_ci(std::span<const double>(cv.data(), static_cast<std::size_t>(cv.size())),
                                 std::span<const double>(obs.data(), static_cast<std::size_t>(obs.size())),
                                 opt.n_boot, opt.level, rng::derive_key(opt.seed, "pls.r_ci." + std::to_string(k)),
                                 stats::Correlation::pearson);
      } catch (const NumericalError&) {
      }
    }
    run.prediction.r_cv_ci.push_back(ci);
  }
  const Eigen::MatrixXd zobs = ys.transform(y);
  const Eigen::MatrixXd zpred = ys.transform(run.cv_prediction);
  run.prediction.r_pooled = pearson_or_nan(Eigen::Map<const Eigen::VectorXd>(zpred.data(), zpred.size()),
                                           Eigen::Map<const Eigen::VectorXd>(zobs.data(), zobs.size()));
  run.prediction.r2_pooled = run.prediction.r_pooled * run.prediction.r_pooled;
  return run;
}

ReducedResult reduced_model(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, std::size_t m,
                            std::size_t n_boot_stability, const PipelineOptions& opt,
                            const std::vector<std::string>& feature_names,
                            const std::vector<std::string>& target_names) {
  if (m < 1 || m > static_cast<std::size_t>(x.cols())) throw std::invalid_argument("reduced_model: m outside 1..p");
  ReducedResult out;
  out.stability = bootstrap_stability(x, y, n_boot_stability, opt.seed);
  out.full = run_model(x, y, {}, opt, feature_names, target_names);
  out.reduced = run_model(x, y, top_features(out.stability, m), opt, feature_names, target_names);
  return out;
}

}  // namespace lingstat::pls
