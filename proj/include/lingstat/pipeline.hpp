#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lingstat/corpus.hpp"
#include "lingstat/keyvalue.hpp"
#include "lingstat/pls.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::pipeline {

// Batch run settings. Defaults follow the published analysis: alpha 0.05,
// 10,000 permutations and bootstrap samples, 5 folds, 4 features per target
// model and 5 for the joint model.
struct RunConfig {
  std::string assessments;
  std::string features;
  std::string mapping;
  std::string out = "out";
  std::vector<std::string> models;  // `within`: model files; empty = reduced and full from `out`
  // Targets of `between` and the per-target `pls` runs; the joint model needs all three.
  std::vector<corpus::Target> targets{corpus::kTargets.begin(), corpus::kTargets.end()};

  double alpha = 0.05;
  std::size_t n_perm = 10000;
  std::size_t n_boot = 10000;
  std::size_t n_boot_stability = 10000;
  int folds = 5;
  int k_max = 10;
  std::size_t m = 4;
  std::size_t m_combined = 5;
  std::uint64_t seed = 20181101;
  pls::Standardization standardization = pls::Standardization::per_fold;
  int min_threshold = 3;
  int max_threshold = corpus::kMaxWave;
  bool svg = false;

  // Keys mirror the field names (n_perm, n_boot, ...). Throws ConfigError
  // naming the offending key.
  static RunConfig from_config(const KeyValueConfig& cfg);
  void validate() const;
};

corpus::LongitudinalDataset load(const RunConfig& cfg);

struct ExtractSummary {
  std::size_t documents = 0;
  std::size_t failed = 0;
};

// One feature row per regular file in `corpus_dir` (sorted by name).
ExtractSummary run_extract(const std::string& corpus_dir, const std::string& lexicon_path,
                           const std::string& out_path);

struct BetweenResult {
  stats::PermutationReport permutation;
  std::vector<std::vector<stats::ConfidenceInterval>> ci;  // [feature][target]
  std::vector<std::string> feature_names;
  std::vector<corpus::Target> targets;  // report columns
};

BetweenResult between_analysis(const corpus::ParticipantMeans& means, const RunConfig& cfg);
BetweenResult run_between(const RunConfig& cfg);

struct PlsResults {
  std::vector<std::string> names;  // phq9, gad7, suicidality, combined
  std::vector<pls::ReducedResult> runs;
};

PlsResults pls_analysis(const corpus::ParticipantMeans& means, const RunConfig& cfg);
PlsResults run_pls(const RunConfig& cfg);

void run_within(const RunConfig& cfg);

// Consolidated summary of whatever outputs exist in cfg.out. Never fails on a
// missing analysis output; it is recorded as a gap.
void run_report(const RunConfig& cfg, bool have_dataset);

// Stage seeds derived from the single run seed.
std::uint64_t stage_seed(const RunConfig& cfg, std::string_view stage);

}  // namespace lingstat::pipeline
