#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "lingstat/corpus.hpp"
#include "lingstat/pls.hpp"

namespace lingstat::longitudinal {

struct ParticipantSeries {
  std::string id;
  std::vector<int> waves;  // usable waves: assessed and with >= 1 feature record
  Eigen::VectorXd observed;
  Eigen::VectorXd predicted;
  double r = 0;            // NaN when undefined
  std::string excluded;    // reason r is undefined, empty otherwise

  std::size_t points() const { return waves.size(); }
};

struct ThresholdRow {
  int min_points = 0;
  std::size_t n_eligible = 0;   // participants with >= min_points usable waves
  std::size_t n_excluded = 0;   // eligible but r undefined
  std::vector<double> r;        // contributing participants, dataset order
  bool testable = false;        // >= 2 contributors with non-constant z
  double mean_r = 0;
  double mean_z = 0;
  double ci_lower = 0, ci_upper = 0;          // Fisher-z CI, back-transformed
  double raw_ci_lower = 0, raw_ci_upper = 0;  // t interval on raw r
  double t = 0, df = 0, p = 1;

  std::size_t n_contributing() const { return r.size(); }
};

struct WithinSubjectReport {
  corpus::Target target{};
  std::vector<ParticipantSeries> participants;
  std::vector<ThresholdRow> rows;
  double level = 0.95;
};

// Applies the group model at every usable wave of every participant, then
// correlates predicted with observed scores per participant. Feature records
// sharing a wave are averaged first. Throws std::invalid_argument when the
// model does not predict `target` or lacks a dataset feature column.
WithinSubjectReport within_subject(const pls::PlsModel& model, const corpus::LongitudinalDataset& ds,
                                   corpus::Target target, int min_threshold = 3,
                                   int max_threshold = corpus::kMaxWave);

// Pooled test of per-participant r values: Fisher z, one-sample t against 0.
ThresholdRow pooled_test(std::vector<double> r, double level = 0.95);

void write_thresholds(std::ostream& os, const WithinSubjectReport& report);
void write_participants(std::ostream& os, const WithinSubjectReport& report);

}  // namespace lingstat::longitudinal
