// Batch front end: extract | between | pls | within | report.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "lingstat/error.hpp"
#include "lingstat/lexicon.hpp"
#include "lingstat/log.hpp"
#include "lingstat/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lingstat;

namespace {

struct Overrides {
  std::string config;
  std::string assessments, features, mapping, out, standardization;
  std::vector<std::string> models, targets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_perm, n_boot, n_boot_stability, m, m_combined;
  std::optional<int> folds, k_max, min_threshold, max_threshold;
  std::optional<double> alpha;
  bool svg = false;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "key=value run configuration file");
  cmd->add_option("--assessments", o.assessments, "assessments CSV");
  cmd->add_option("--features", o.features, "features CSV");
  cmd->add_option("--mapping", o.mapping, "column mapping file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "run seed");
  cmd->add_option("--n-perm", o.n_perm, "permutations");
  cmd->add_option("--n-boot", o.n_boot, "bootstrap samples");
  cmd->add_option("--n-boot-stability", o.n_boot_stability, "bootstrap samples for feature stability");
  cmd->add_option("--folds", o.folds, "cross-validation folds");
  cmd->add_option("--k-max", o.k_max, "largest PLS component count tried");
  cmd->add_option("--m", o.m, "features in reduced per-target models");
  cmd->add_option("--m-combined", o.m_combined, "features in the reduced joint model");
  cmd->add_option("--alpha", o.alpha, "family-wise alpha");
  cmd->add_option("--standardization", o.standardization, "per_fold | global");
  cmd->add_option("--targets", o.targets, "phq9, gad7, suicidality (default: all)")->delimiter(',');
  cmd->add_option("--min-threshold", o.min_threshold, "smallest within-subject threshold");
  cmd->add_option("--max-threshold", o.max_threshold, "largest within-subject threshold");
}

// Relative paths in a config file resolve against the file's directory.
std::string resolve(const std::string& value, const fs::path& base) {
  if (value.empty() || fs::path(value).is_absolute()) return value;
  return (base / value).lexically_normal().string();
}

pipeline::RunConfig build_config(const Overrides& o) {
  KeyValueConfig kv;
  fs::path base;
  if (!o.config.empty()) {
    kv = KeyValueConfig::read_file(o.config);
    base = fs::path(o.config).parent_path();
  }
  auto cfg = pipeline::RunConfig::from_config(kv);
  cfg.assessments = resolve(cfg.assessments, base);
  cfg.features = resolve(cfg.features, base);
  cfg.mapping = resolve(cfg.mapping, base);
  if (kv.has("out")) cfg.out = resolve(cfg.out, base);
  for (auto& m : cfg.models) m = resolve(m, base);

  if (!o.assessments.empty()) cfg.assessments = o.assessments;
  if (!o.features.empty()) cfg.features = o.features;
  if (!o.mapping.empty()) cfg.mapping = o.mapping;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.models.empty()) cfg.models = o.models;
  if (o.seed) cfg.seed = *o.seed;
  if (o.n_perm) cfg.n_perm = *o.n_perm;
  if (o.n_boot) {
    cfg.n_boot = *o.n_boot;
    if (!kv.has("n_boot_stability")) cfg.n_boot_stability = *o.n_boot;
  }
  if (o.n_boot_stability) cfg.n_boot_stability = *o.n_boot_stability;
  if (o.m) cfg.m = *o.m;
  if (o.m_combined) cfg.m_combined = *o.m_combined;
  if (o.folds) cfg.folds = *o.folds;
  if (o.k_max) cfg.k_max = *o.k_max;
  if (o.min_threshold) cfg.min_threshold = *o.min_threshold;
  if (o.max_threshold) cfg.max_threshold = *o.max_threshold;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.svg) cfg.svg = true;
  if (!o.targets.empty()) {
    cfg.targets.clear();
    for (const auto& key : o.targets) {
      const auto t = corpus::parse_target(key);
      if (!t) throw ConfigError("--targets: unknown target '" + key + "'");
      cfg.targets.push_back(*t);
    }
  }
  if (!o.standardization.empty()) {
    if (o.standardization == "per_fold") {
      cfg.standardization = pls::Standardization::per_fold;
    } else if (o.standardization == "global") {
      cfg.standardization = pls::Standardization::global;
    } else {
      throw ConfigError("--standardization: expected per_fold or global");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linguistic features vs. mental-health scores: batch analyses"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  std::string corpus_dir, lexicon_path, extract_out;
  auto* extract = app.add_subcommand("extract", "word-count features for a directory of documents");
  extract->add_option("--corpus", corpus_dir, "directory of UTF-8 text files")->required();
  extract->add_option("--lexicon", lexicon_path, "lexicon file")->required();
  extract->add_option("--out", extract_out, "output CSV")->required();

  Overrides between_o, pls_o, within_o, report_o;
  auto* between = app.add_subcommand("between", "mass-bivariate Spearman analysis with max-statistic FWER control");
  add_run_options(between, between_o);
  auto* pls_cmd = app.add_subcommand("pls", "PLS regression: CV, stability selection, reduced and joint models");
  add_run_options(pls_cmd, pls_o);
  pls_cmd->add_flag("--svg", pls_o.svg, "write predicted-vs-observed scatter plots");
  auto* within = app.add_subcommand("within", "within-subject generalizability of group models");
  add_run_options(within, within_o);
  within->add_option("--model", within_o.models, "model file(s); default: all models in the output directory");
  auto* report = app.add_subcommand("report", "consolidated summary of an output directory");
  add_run_options(report, report_o);

  CLI11_PARSE(app, argc, argv);
  if (quiet) log::set_level(log::Level::quiet);

  try {
    if (*extract) {
      const auto s = pipeline::run_extract(corpus_dir, lexicon_path, extract_out);
      std::cout << "extracted " << s.documents << " document(s)";
      if (s.failed) std::cout << ", " << s.failed << " unreadable";
      std::cout << '\n';
    } else if (*between) {
      const auto r = pipeline::run_between(build_config(between_o));
      std::cout << "critical |rho| = " << r.permutation.critical_value << '\n';
    } else if (*pls_cmd) {
      pipeline::run_pls(build_config(pls_o));
    } else if (*within) {
      pipeline::run_within(build_config(within_o));
    } else if (*report) {
      const auto cfg = build_config(report_o);
      const bool have_dataset = !cfg.assessments.empty() && !cfg.features.empty() && !cfg.mapping.empty();
      pipeline::run_report(cfg, have_dataset);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lexicon::LexiconError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
