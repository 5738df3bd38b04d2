#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lingstat/csv.hpp"
#include "lingstat/keyvalue.hpp"

namespace lingstat::corpus {

inline constexpr int kMaxWave = 18;

enum class Target { phq9 = 0, gad7 = 1, suicidality = 2 };
inline constexpr std::array<Target, 3> kTargets{Target::phq9, Target::gad7, Target::suicidality};

// Display name ("PHQ-9") and file-safe key ("phq9").
std::string_view target_name(Target t);
std::string_view target_key(Target t);
std::optional<Target> parse_target(std::string_view key_or_name);

struct Assessment {
  std::string participant_id;
  int wave = 0;
  int phq9 = 0;
  int gad7 = 0;
  int suicidality = 0;

  double score(Target t) const;
};

// One blog post's features. wave == 0 marks a post that could not be attributed
// to any assessment window; it still counts toward participant means.
struct FeatureRecord {
  std::string participant_id;
  int wave = 0;
  std::vector<double> values;
};

struct Participant {
  std::string id;
  std::vector<Assessment> assessments;  // sorted by wave
  std::vector<FeatureRecord> records;   // file order
};

struct LoadStats {
  std::size_t dropped_without_records = 0;
  std::size_t dropped_without_assessments = 0;
  std::size_t rejected_records = 0;
  std::size_t unattributed_records = 0;
  std::size_t skipped_blank_assessments = 0;
};

struct LongitudinalDataset {
  std::vector<std::string> feature_names;
  std::vector<Participant> participants;
  LoadStats stats;

  std::size_t n_records() const;
  bool empty() const { return participants.empty(); }
};

// Column mapping read from a key=value file.
//
//   assessments.participant, assessments.wave, assessments.phq9,
//   assessments.gad7, assessments.suicidality      required
//   assessments.date                               required with features.date
//   features.participant                           required
//   features.wave | features.date                  exactly one required
//   features.columns    "*" (all unmapped columns, file order) or a list
//   features.exclude    columns dropped from "*"
//   features.percent    columns whose values must lie in [0,100] ("*" = all)
//   features.percent_exclude  columns exempted from the range check
//   window.days         fortnight window for date alignment (default 14)
struct ColumnMapping {
  std::string a_participant, a_wave, a_phq9, a_gad7, a_suicidality, a_date;
  std::string f_participant, f_wave, f_date;
  std::vector<std::string> f_columns;  // empty means "*"
  std::vector<std::string> f_exclude;
  std::vector<std::string> f_percent;
  std::vector<std::string> f_percent_exclude;
  bool f_percent_all = false;
  int window_days = 14;

  static ColumnMapping from_config(const KeyValueConfig& cfg);
};

LongitudinalDataset load_dataset(const csv::Table& assessments, const csv::Table& features,
                                 const ColumnMapping& mapping);
LongitudinalDataset load_dataset(const std::string& assessments_path,
                                 const std::string& features_path, const ColumnMapping& mapping);

struct ParticipantMeans {
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;  // n x p
  Eigen::MatrixXd targets;   // n x 3, columns (PHQ-9, GAD-7, suicidality)
};

ParticipantMeans participant_means(const LongitudinalDataset& ds);

struct TargetSummary {
  double mean = 0, sd = 0, min = 0, max = 0;  // over participant means, sample SD
  double intra_sd_mean = 0, intra_sd_sd = 0, intra_sd_min = 0, intra_sd_max = 0;
};

struct CohortSummary {
  std::size_t n_participants = 0;
  std::size_t n_posts = 0;
  std::array<TargetSummary, 3> targets{};
  std::array<std::size_t, kMaxWave> assessment_histogram{};  // bin i = participants with i+1 assessments
  std::vector<std::string> ids;
  std::vector<std::array<double, 3>> intra_sd;  // per participant
  std::string intra_sd_convention = "population";
};

CohortSummary summarize(const LongitudinalDataset& ds);

void write_summary(std::ostream& os, const CohortSummary& s);
void write_histogram(std::ostream& os, const CohortSummary& s);
void write_intra_sd(std::ostream& os, const CohortSummary& s);

}  // namespace lingstat::corpus
