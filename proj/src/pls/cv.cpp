#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingstat/error.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::pls {

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

// Fold-centered scaler that keeps the full-data SDs.
Scaler recentered(const Scaler& global, const Eigen::MatrixXd& fold) {
  Scaler s = global;
  s.means = fold.colwise().mean().transpose();
  return s;
}

}  // namespace

int select_components(const std::vector<double>& mse) {
  int k = 0;
  while (static_cast<std::size_t>(k + 1) < mse.size() && mse[static_cast<std::size_t>(k + 1)] < mse[static_cast<std::size_t>(k)]) ++k;
  return k;
}

std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (n / static_cast<std::size_t>(folds) < 2) {
    throw std::invalid_argument("cross-validation: a fold would have fewer than 2 rows (n = " +
                                std::to_string(n) + ", folds = " + std::to_string(folds) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::Stream stream(rng::derive_key(seed, "pls.folds"), 0);
  rng::shuffle(std::span<std::size_t>(order), stream);
  std::vector<int> fold(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));
  return fold;
}

CvCurve kfold_cv(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const CvOptions& opt) {
  const Eigen::Index n = x.rows();
  const Eigen::Index q = y.cols();
  if (y.rows() != n) throw std::invalid_argument("kfold_cv: row mismatch");
  if (opt.k_max < 1) throw std::invalid_argument("kfold_cv: k_max must be >= 1");

  CvCurve curve;
  curve.folds = opt.folds;
  curve.seed = opt.seed;
  curve.fold_of_row = assign_folds(static_cast<std::size_t>(n), opt.folds, opt.seed);

  const Scaler x_global = Scaler::fit(x);
  const Scaler y_global = Scaler::fit(y);
  if (y_global.n_retained() != static_cast<std::size_t>(q)) {
    throw NumericalError("kfold_cv: zero-variance target");
  }

  struct FoldResult {
    std::vector<Eigen::Index> test;
    std::vector<Eigen::MatrixXd> pred;  // k = 0..kf
  };
  std::vector<FoldResult> results(static_cast<std::size_t>(opt.folds));
  int k_common = opt.k_max;

  for (int f = 0; f < opt.folds; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i) (curve.fold_of_row[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
    const Eigen::MatrixXd xtr = take_rows(x, train), ytr = take_rows(y, train);
    const Eigen::MatrixXd xte = take_rows(x, test);

    Scaler xs, ys;
    if (opt.standardization == Standardization::per_fold) {
      xs = Scaler::fit(xtr);
      ys = Scaler::fit(ytr);
    } else {
      xs = recentered(x_global, xtr);
      ys = recentered(y_global, ytr);
      // A column constant within the training fold carries no information there.
      const Scaler local = Scaler::fit(xtr);
      for (std::size_t c = 0; c < xs.retained.size(); ++c) xs.retained[c] = xs.retained[c] && local.retained[c];
      if (Scaler::fit(ytr).n_retained() != static_cast<std::size_t>(q)) {
        throw NumericalError("kfold_cv: zero-variance target in training fold " + std::to_string(f));
      }
    }
    const int kf = std::min<int>(opt.k_max, static_cast<int>(std::min<std::size_t>(train.size() - 1, xs.n_retained())));
    k_common = std::min(k_common, kf);

    auto& res = results[static_cast<std::size_t>(f)];
    res.test = test;
    const Eigen::MatrixXd zte = xs.transform(xte);
    res.pred.push_back(ys.inverse(Eigen::MatrixXd::Zero(zte.rows(), q)));
    if (kf >= 1) {
      const PlsModel model = simpls_fit(xtr, ytr, kf, xs, ys);
      const Eigen::MatrixXd t = zte * model.x_weights;
      for (int k = 1; k <= kf; ++k) {
        res.pred.push_back(ys.inverse(t.leftCols(k) * model.y_loadings.leftCols(k).transpose()));
      }
    }
  }

  curve.predictions.assign(static_cast<std::size_t>(k_common + 1), Eigen::MatrixXd::Zero(n, q));
  curve.mse.assign(static_cast<std::size_t>(k_common + 1), 0.0);
  for (const auto& res : results) {
    for (int k = 0; k <= k_common; ++k) {
      for (std::size_t i = 0; i < res.test.size(); ++i) {
        curve.predictions[static_cast<std::size_t>(k)].row(res.test[i]) = res.pred[static_cast<std::size_t>(k)].row(static_cast<Eigen::Index>(i));
      }
    }
  }
  for (int k = 0; k <= k_common; ++k) {
    const Eigen::MatrixXd err = curve.predictions[static_cast<std::size_t>(k)] - y;
    double sse = 0;
    for (Eigen::Index c = 0; c < q; ++c) sse += (err.col(c) / y_global.sds(c)).squaredNorm();
    curve.mse[static_cast<std::size_t>(k)] = sse / static_cast<double>(n);
  }
  curve.selected_k = select_components(curve.mse);
  return curve;
}

}  // namespace lingstat::pls
