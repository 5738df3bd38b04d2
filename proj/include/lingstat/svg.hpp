#pragma once

#include <Eigen/Dense>
#include <string>

namespace lingstat::svg {

// Minimal static scatter plot with an identity-scaled frame and axis labels.
void write_scatter(const std::string& path, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const std::string& title, const std::string& x_label, const std::string& y_label);

}  // namespace lingstat::svg
