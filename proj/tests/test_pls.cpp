#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lingstat/error.hpp"
#include "lingstat/pls.hpp"
#include "lingstat/rng.hpp"
#include "oracles.hpp"
#include "support/synthetic.hpp"

using namespace lingstat;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  rng::Stream s(seed, 0);
  return synthetic::gaussian_matrix(n, p, s);
}

// Prediction from the stored matrices: z-score, multiply, rescale.
Eigen::MatrixXd replay(const pls::PlsModel& m, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const bool keep = m.x_scaler.retained[static_cast<std::size_t>(c)];
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      z(i, c) = keep ? (x(i, c) - m.x_scaler.means(c)) / m.x_scaler.sds(c) : 0.0;
  }
  Eigen::MatrixXd out(x.rows(), m.beta.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < m.beta.cols(); ++k) {
      double s = 0;
      for (Eigen::Index c = 0; c < x.cols(); ++c) s += z(i, c) * m.beta(c, k);
      out(i, k) = s * m.y_scaler.sds(k) + m.y_scaler.means(k);
    }
  return out;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("scaler uses the population SD and flags constant columns") {
  Eigen::MatrixXd m(4, 2);
  m << 1, 5, 2, 5, 3, 5, 4, 5;
  const auto s = pls::Scaler::fit(m);
  CHECK(s.means(0) == doctest::Approx(2.5));
  CHECK(s.sds(0) == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.retained == std::vector<bool>{true, false});
  CHECK(s.n_retained() == 1);
  const Eigen::MatrixXd z = s.transform(m);
  CHECK(z.col(1).isZero());
  CHECK(z.col(0).squaredNorm() / 4 == doctest::Approx(1.0));
}

TEST_CASE("single-feature perfect target") {
  // Centered, mutually orthogonal columns: one component isolates the target feature.
  Eigen::MatrixXd g = gaussian(30, 4, 1);
  g.rowwise() -= g.colwise().mean();
  const Eigen::MatrixXd x = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(30, 4);
  const Eigen::MatrixXd y = 3.0 * x.col(2).array() + 1.0;
  const auto m = pls::simpls_fit(x, y, 1);
  for (Eigen::Index c = 0; c < 4; ++c) CHECK(std::abs(m.beta(c, 0) - (c == 2 ? 1.0 : 0.0)) < 1e-8);
  const Eigen::MatrixXd yhat = pls::predict(m, x);
  CHECK(max_abs(yhat - y) < 1e-8);
}

TEST_CASE("full-rank fit reproduces least squares") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::MatrixXd x = gaussian(20, 5, 1000 + seed);
    const Eigen::VectorXd y = gaussian(20, 1, 2000 + seed).col(0) + x.col(0);
    const auto m = pls::simpls_fit(x, y, 5);
    const Eigen::VectorXd ols = oracle::standardized_ols(x, y);
    CHECK((m.beta.col(0) - ols).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("replicated rows give the same model") {
  const Eigen::MatrixXd x = gaussian(15, 6, 3);
  const Eigen::MatrixXd y = gaussian(15, 2, 4) + x.leftCols(2);
  Eigen::MatrixXd xx(30, 6), yy(30, 2);
  xx << x, x;
  yy << y, y;
  const auto a = pls::simpls_fit(x, y, 3);
  const auto b = pls::simpls_fit(xx, yy, 3);
  CHECK(max_abs(a.beta - b.beta) < 1e-10);
  CHECK(max_abs(a.x_weights - b.x_weights) < 1e-10);
  CHECK(max_abs(a.y_loadings - b.y_loadings) < 1e-10);
}

TEST_CASE("score orthogonality and prediction equivalence") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index n = 12 + static_cast<Eigen::Index>(seed % 20), p = 3 + static_cast<Eigen::Index>(seed % 9);
    const Eigen::Index q = 1 + static_cast<Eigen::Index>(seed % 3);
    const Eigen::MatrixXd x = gaussian(n, p, 300 + seed);
    const Eigen::MatrixXd y = gaussian(n, q, 400 + seed) + x.leftCols(q);
    const int k = static_cast<int>(std::min(n - 1, p));
    const auto m = pls::simpls_fit(x, y, k);
    const Eigen::MatrixXd t = m.scores(x);
    const Eigen::MatrixXd gram = t.transpose() * t / static_cast<double>(n);
    CHECK(max_abs(gram - Eigen::MatrixXd::Identity(k, k)) < 1e-8);
    const Eigen::MatrixXd xn = gaussian(7, p, 500 + seed);
    CHECK(max_abs(pls::predict(m, xn) - pls::predict_via_components(m, xn)) < 1e-10);
    CHECK(max_abs(pls::predict(m, xn) - replay(m, xn)) < 1e-10);
  }
}

TEST_CASE("prediction at the feature means is the target mean") {
  const Eigen::MatrixXd x = gaussian(25, 5, 6);
  const Eigen::MatrixXd y = gaussian(25, 2, 7) + x.leftCols(2);
  const auto m = pls::simpls_fit(x, y, 2);
  const Eigen::MatrixXd row = x.colwise().mean();
  const Eigen::MatrixXd yhat = pls::predict(m, row);
  CHECK(max_abs(yhat - Eigen::MatrixXd(y.colwise().mean())) < 1e-10);
  CHECK_THROWS_AS(pls::predict(m, gaussian(2, 4, 1)), std::invalid_argument);
}

TEST_CASE("fit errors") {
  const Eigen::MatrixXd x = gaussian(10, 3, 8);
  CHECK_THROWS_AS(pls::simpls_fit(x, gaussian(10, 1, 9), 4), std::invalid_argument);
  CHECK_THROWS_AS(pls::simpls_fit(x, Eigen::MatrixXd::Constant(10, 1, 2.0), 1), NumericalError);
}

TEST_CASE("sign convention") {
  const Eigen::MatrixXd x = gaussian(30, 6, 10);
  const Eigen::MatrixXd y = gaussian(30, 1, 11) - 2 * x.col(3);
  const auto m = pls::simpls_fit(x, y, 3);
  for (int a = 0; a < 3; ++a) {
    Eigen::Index arg;
    m.x_weights.col(a).cwiseAbs().maxCoeff(&arg);
    CHECK(m.x_weights(arg, a) > 0);
  }
}

TEST_CASE("component selection rule") {
  CHECK(pls::select_components({1.0, 0.9, 0.8, 0.85, 0.7}) == 2);
  CHECK(pls::select_components({1.0, 1.1, 0.5}) == 0);
  CHECK(pls::select_components({1.0, 0.9, 0.9, 0.5}) == 1);
  CHECK(pls::select_components({1.0}) == 0);
}

TEST_CASE("fold assignment") {
  const auto f = pls::assign_folds(23, 5, 42);
  std::vector<int> sizes(5, 0);
  for (int v : f) sizes[static_cast<std::size_t>(v)]++;
  CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
  CHECK(f == pls::assign_folds(23, 5, 42));
  CHECK(f != pls::assign_folds(23, 5, 43));
  CHECK_THROWS_AS(pls::assign_folds(9, 5, 1), std::invalid_argument);
}

TEST_CASE("noiseless single-feature cross-validation") {
  const Eigen::MatrixXd x = gaussian(40, 1, 12);
  const Eigen::MatrixXd y = 2.0 * x.array() - 5.0;
  for (auto mode : {pls::Standardization::per_fold, pls::Standardization::global}) {
    pls::CvOptions opt;
    opt.seed = 3;
    opt.standardization = mode;
    const auto cv = pls::kfold_cv(x, y, opt);
    CHECK(cv.selected_k == 1);
    CHECK(cv.mse[1] < 1e-20);
    CHECK(cv.mse[0] > 0.9);
  }
}

TEST_CASE("cross-validation against a direct re-implementation") {
  const Eigen::MatrixXd x = gaussian(30, 6, 13);
  const Eigen::MatrixXd y = gaussian(30, 2, 14) + 0.5 * x.leftCols(2);
  pls::CvOptions opt;
  opt.k_max = 3;
  opt.seed = 99;
  const auto cv = pls::kfold_cv(x, y, opt);
  const auto folds = pls::assign_folds(30, 5, 99);
  CHECK(cv.fold_of_row == folds);
  std::vector<double> sse(4, 0.0);
  const Eigen::VectorXd ysd = ((y.rowwise() - y.colwise().mean()).colwise().squaredNorm() / 30.0).cwiseSqrt();
  for (int f = 0; f < 5; ++f) {
    std::vector<Eigen::Index> tr, te;
    for (Eigen::Index i = 0; i < 30; ++i) (folds[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
    const Eigen::MatrixXd xtr = x(tr, Eigen::all), ytr = y(tr, Eigen::all);
    const Eigen::MatrixXd xte = x(te, Eigen::all), yte = y(te, Eigen::all);
    for (int k = 0; k <= 3; ++k) {
      Eigen::MatrixXd pred;
      if (k == 0) {
        pred = yte;
        for (Eigen::Index i = 0; i < pred.rows(); ++i) pred.row(i) = ytr.colwise().mean();
      } else {
        pred = replay(pls::simpls_fit(xtr, ytr, k), xte);
      }
      for (Eigen::Index c = 0; c < 2; ++c) sse[static_cast<std::size_t>(k)] += ((pred.col(c) - yte.col(c)) / ysd(c)).squaredNorm();
    }
  }
  for (int k = 0; k <= 3; ++k) CHECK(cv.mse[static_cast<std::size_t>(k)] == doctest::Approx(sse[static_cast<std::size_t>(k)] / 30.0).epsilon(1e-10));
}

TEST_CASE("positive rescaling of features changes nothing") {
  const Eigen::MatrixXd x = gaussian(30, 8, 15);
  const Eigen::MatrixXd y = gaussian(30, 1, 16) + x.col(0) - 0.5 * x.col(4);
  Eigen::MatrixXd xs = x;
  for (Eigen::Index c = 0; c < 8; ++c) xs.col(c) = xs.col(c) * (0.5 + static_cast<double>(c)) + Eigen::VectorXd::Constant(30, 3.0 * static_cast<double>(c));
  CHECK(max_abs(pls::simpls_fit(x, y, 2).beta - pls::simpls_fit(xs, y, 2).beta) < 1e-10);
  pls::CvOptions opt;
  opt.seed = 4;
  const auto a = pls::kfold_cv(x, y, opt), b = pls::kfold_cv(xs, y, opt);
  REQUIRE(a.mse.size() == b.mse.size());
  for (std::size_t k = 0; k < a.mse.size(); ++k) CHECK(a.mse[k] == doctest::Approx(b.mse[k]).epsilon(1e-9));
  CHECK(a.selected_k == b.selected_k);
  const auto sa = pls::bootstrap_stability(x, y, 200, 5), sb = pls::bootstrap_stability(xs, y, 200, 5);
  CHECK(sa.ranking == sb.ranking);
  CHECK(max_abs(sa.z_scores - sb.z_scores) < 1e-8);
}

TEST_CASE("cross-validation is deterministic across runs and thread counts") {
  const Eigen::MatrixXd x = gaussian(38, 20, 17);
  const Eigen::MatrixXd y = gaussian(38, 3, 18) + 0.3 * x.leftCols(3);
  pls::CvOptions opt;
  opt.seed = 8;
  omp_set_num_threads(1);
  const auto a = pls::kfold_cv(x, y, opt);
  const auto sa = pls::bootstrap_stability(x, y, 300, 2);
  omp_set_num_threads(4);
  const auto b = pls::kfold_cv(x, y, opt);
  const auto sb = pls::bootstrap_stability(x, y, 300, 2);
  CHECK(a.mse == b.mse);
  CHECK(a.selected_k == b.selected_k);
  CHECK(sa.ranking == sb.ranking);
  CHECK(sa.z_scores == sb.z_scores);
  const auto ref = pls::serial::bootstrap_stability(x, y, 300, 2);
  CHECK(ref.ranking == sa.ranking);
  CHECK(max_abs(ref.z_scores - sa.z_scores) < 1e-9);
}

TEST_CASE("stability ranks a dominant feature first") {
  Eigen::MatrixXd x = gaussian(38, 10, 19);
  const Eigen::MatrixXd y = x.col(6);
  const auto s = pls::bootstrap_stability(x, y, 300, 3);
  CHECK(s.ranking.front() == 6);
  for (std::size_t i = 1; i < s.ranking.size(); ++i)
    CHECK(std::abs(s.z_scores(static_cast<Eigen::Index>(s.ranking[i - 1]))) >=
          std::abs(s.z_scores(static_cast<Eigen::Index>(s.ranking[i]))));
  std::vector<std::size_t> sorted = s.ranking;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  const auto top = pls::top_features(s, 3);
  CHECK(top.size() == 3);
  CHECK(std::find(top.begin(), top.end(), 6u) != top.end());
}

TEST_CASE("reduced model with m = p equals the full model") {
  const Eigen::MatrixXd x = gaussian(30, 5, 20);
  const Eigen::MatrixXd y = gaussian(30, 1, 21) + x.col(1);
  pls::PipelineOptions opt;
  opt.cv.seed = 5;
  opt.n_boot = 200;
  opt.seed = 6;
  const auto r = pls::reduced_model(x, y, 5, 100, opt);
  CHECK(r.full.curve.mse == r.reduced.curve.mse);
  CHECK(r.reduced.features == r.full.features);
  CHECK(max_abs(r.full.model.beta - r.reduced.model.beta) < 1e-12);
  CHECK(max_abs(r.full.cv_prediction - r.reduced.cv_prediction) < 1e-12);
  CHECK(r.full.prediction.r_cv == r.reduced.prediction.r_cv);
}

TEST_CASE("identical target columns share y-loadings") {
  const Eigen::MatrixXd x = gaussian(30, 6, 22);
  const Eigen::VectorXd t = gaussian(30, 1, 23).col(0) + x.col(2);
  Eigen::MatrixXd y(30, 3);
  y << t, t, t;
  const auto m = pls::simpls_fit(x, y, 2);
  CHECK(max_abs(m.y_loadings.row(0) - m.y_loadings.row(1)) < 1e-12);
  CHECK(max_abs(m.y_loadings.row(0) - m.y_loadings.row(2)) < 1e-12);
}

TEST_CASE("run_model summaries") {
  const Eigen::MatrixXd x = gaussian(38, 8, 24);
  const Eigen::MatrixXd y = gaussian(38, 1, 25) + 1.5 * x.col(0);
  pls::PipelineOptions opt;
  opt.cv.seed = 1;
  opt.n_boot = 300;
  const auto run = pls::run_model(x, y, {}, opt);
  CHECK(run.fit_k == std::max(run.curve.selected_k, 1));
  CHECK(run.prediction.r_cv.size() == 1);
  CHECK(run.prediction.r_pooled == doctest::Approx(run.prediction.r_cv[0]));
  CHECK(run.prediction.r2_pooled == doctest::Approx(run.prediction.r_cv[0] * run.prediction.r_cv[0]));
  CHECK(run.prediction.r_cv_ci[0].lower <= run.prediction.r_cv[0]);
  CHECK(run.prediction.r_cv_ci[0].upper >= run.prediction.r_cv[0]);
  CHECK(run.prediction.r_in_sample[0] >= run.prediction.r_cv[0]);
  CHECK(max_abs(run.cv_prediction - run.curve.predictions[static_cast<std::size_t>(run.fit_k)]) == 0.0);
  CHECK(run.mse_change_fit() < 0);
}

TEST_CASE("model files round-trip exactly") {
  const Eigen::MatrixXd x = gaussian(20, 4, 26);
  const Eigen::MatrixXd y = gaussian(20, 2, 27) + x.leftCols(2);
  auto m = pls::simpls_fit(x, y, 2);
  m.feature_names = {"a", "b c", "d,e", "f"};
  m.target_names = {"phq9", "gad7"};
  m.seed = 123;
  m.provenance = "unit test";
  std::stringstream ss;
  pls::write_model(ss, m);
  const auto r = pls::read_model(ss);
  CHECK(r.n_components == m.n_components);
  CHECK(r.beta == m.beta);
  CHECK(r.x_weights == m.x_weights);
  CHECK(r.x_loadings == m.x_loadings);
  CHECK(r.y_loadings == m.y_loadings);
  CHECK(r.x_scaler.means == m.x_scaler.means);
  CHECK(r.x_scaler.sds == m.x_scaler.sds);
  CHECK(r.y_scaler.sds == m.y_scaler.sds);
  CHECK(r.feature_names == m.feature_names);
  CHECK(r.target_names == m.target_names);
  CHECK(r.seed == 123);
  CHECK(r.provenance == m.provenance);
  std::stringstream bad("not a model\n");
  CHECK_THROWS_AS(pls::read_model(bad), ConfigError);
}
