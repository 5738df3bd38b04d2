#include <cmath>

#include "lingstat/error.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::pls {

PlsModel simpls_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k) {
  if (x.rows() != y.rows()) throw std::invalid_argument("simpls_fit: row mismatch");
  return simpls_fit(x, y, k, Scaler::fit(x), Scaler::fit(y));
}

PlsModel simpls_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k,
                    const Scaler& x_scaler, const Scaler& y_scaler) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const Eigen::Index q = y.cols();
  if (y.rows() != n) throw std::invalid_argument("simpls_fit: row mismatch");
  if (n < 2) throw std::invalid_argument("simpls_fit: need at least 2 rows");
  const auto usable = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(x_scaler.n_retained()));
  if (k < 1 || k > usable) {
    throw std::invalid_argument("simpls_fit: k = " + std::to_string(k) + " outside 1.." + std::to_string(usable));
  }
  if (y_scaler.n_retained() != static_cast<std::size_t>(q)) {
    throw NumericalError("simpls_fit: zero-variance target");
  }

  const Eigen::MatrixXd z = x_scaler.transform(x);
  const Eigen::MatrixXd w = y_scaler.transform(y);
  const double root_n = std::sqrt(static_cast<double>(n));

  PlsModel m;
  m.n_components = k;
  m.x_weights.resize(p, k);
  m.x_loadings.resize(p, k);
  m.y_loadings.resize(q, k);
  m.x_scaler = x_scaler;
  m.y_scaler = y_scaler;

  Eigen::MatrixXd cov = z.transpose() * w;
  const double cov_norm0 = cov.norm();
  if (!(cov_norm0 > 0)) throw NumericalError("simpls_fit: features carry no covariance with targets");
  Eigen::MatrixXd basis(p, k);

  for (int a = 0; a < k; ++a) {
    if (cov.norm() <= 1e-12 * cov_norm0) {
      throw NumericalError("simpls_fit: component " + std::to_string(a + 1) + " is degenerate");
    }
    // Dominant left singular vector of the (deflated) cross-covariance.
    Eigen::VectorXd r;
    if (q == 1) {
      r = cov.col(0).normalized();
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeThinU);
      r = svd.matrixU().col(0);
    }
    Eigen::VectorXd t = z * r;
    const double t_norm = t.norm();
    if (!(t_norm > 1e-12)) {
      throw NumericalError("simpls_fit: component " + std::to_string(a + 1) + " has zero scores");
    }
    r *= root_n / t_norm;
    t *= root_n / t_norm;
    Eigen::Index lead = 0;
    r.cwiseAbs().maxCoeff(&lead);
    if (r(lead) < 0) {
      r = -r;
      t = -t;
    }
    const Eigen::VectorXd x_load = z.transpose() * t / static_cast<double>(n);
    m.x_weights.col(a) = r;
    m.x_loadings.col(a) = x_load;
    m.y_loadings.col(a) = w.transpose() * t / static_cast<double>(n);

    // Orthonormal basis of the loadings (modified Gram-Schmidt, two passes).
    Eigen::VectorXd v = x_load;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < a; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    }
    v.normalize();
    basis.col(a) = v;
    cov -= v * (v.transpose() * cov);
    cov -= basis.leftCols(a + 1) * (basis.leftCols(a + 1).transpose() * cov);
  }
  m.beta = m.x_weights * m.y_loadings.transpose();
  return m;
}

Eigen::MatrixXd PlsModel::scores(const Eigen::MatrixXd& x) const {
  return x_scaler.transform(x) * x_weights;
}

Eigen::MatrixXd predict(const PlsModel& model, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != model.beta.rows()) {
    throw std::invalid_argument("predict: expected " + std::to_string(model.beta.rows()) +
                                " feature columns, got " + std::to_string(x_new.cols()));
  }
  return model.y_scaler.inverse(model.x_scaler.transform(x_new) * model.beta);
}

Eigen::MatrixXd predict_via_components(const PlsModel& model, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != model.beta.rows()) {
    throw std::invalid_argument("predict: feature column count mismatch");
  }
  return model.y_scaler.inverse(model.scores(x_new) * model.y_loadings.transpose());
}

}  // namespace lingstat::pls
