#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "lingstat/rng.hpp"

namespace lingstat::synthetic {

// Box-Muller on the counter-based stream (portable across standard libraries).
double normal(rng::Stream& s);

struct CohortOptions {
  int participants = 38;
  int features = 68;
  std::uint64_t seed = 1;
  // Between-subject loading of the first `signal_features` features on the latent trait.
  int signal_features = 6;
  double signal = 0.8;
  // Within-subject coupling: each participant's scores also move with the
  // wave-level features by slope `within_mean + within_sd * N(0,1)`.
  double within_mean = 0.0;
  double within_sd = 0.0;
  int max_posts = 30;
};

// Writes assessments.csv, features.csv and mapping.cfg into `dir`.
void write_cohort(const std::string& dir, const CohortOptions& opt);

// n x p independent standard normals.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, rng::Stream& s);

}  // namespace lingstat::synthetic
