#include <cmath>

#include "lingstat/pls.hpp"

namespace lingstat::pls {

Scaler Scaler::fit(const Eigen::MatrixXd& m) {
  Scaler s;
  const auto n = static_cast<double>(m.rows());
  s.means = m.colwise().mean().transpose();
  s.sds.resize(m.cols());
  s.retained.assign(static_cast<std::size_t>(m.cols()), true);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double ss = (m.col(c).array() - s.means(c)).square().sum();
    const double sd = std::sqrt(ss / n);
    // Relative cutoff: a constant column can still carry rounding noise.
    const double scale = std::max(1.0, std::abs(s.means(c)));
    if (!(sd > 1e-12 * scale)) {
      s.sds(c) = 1.0;
      s.retained[static_cast<std::size_t>(c)] = false;
    } else {
      s.sds(c) = sd;
    }
  }
  return s;
}

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd& m) const {
  Eigen::MatrixXd z(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (retained[static_cast<std::size_t>(c)]) {
      z.col(c) = (m.col(c).array() - means(c)) / sds(c);
    } else {
      z.col(c).setZero();
    }
  }
  return z;
}

Eigen::MatrixXd Scaler::inverse(const Eigen::MatrixXd& z) const {
  Eigen::MatrixXd m(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    m.col(c) = z.col(c).array() * sds(c) + means(c);
  }
  return m;
}

std::size_t Scaler::n_retained() const {
  std::size_t k = 0;
  for (bool r : retained) k += r ? 1 : 0;
  return k;
}

}  // namespace lingstat::pls
