#include "lingstat/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "lingstat/csv.hpp"
#include "lingstat/error.hpp"
#include "lingstat/lexicon.hpp"
#include "lingstat/log.hpp"
#include "lingstat/longitudinal.hpp"
#include "lingstat/rng.hpp"
#include "lingstat/svg.hpp"

namespace fs = std::filesystem;

namespace lingstat::pipeline {

namespace {

template <typename T>
T parse_number(const KeyValueConfig& cfg, std::string_view key, T fallback) {
  const auto v = cfg.get(key);
  if (!v || v->empty()) return fallback;
  T out{};
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + *v + "'");
  }
  return out;
}

bool parse_bool(const KeyValueConfig& cfg, std::string_view key, bool fallback) {
  const auto v = cfg.get(key);
  if (!v || v->empty()) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" + *v + "'");
}

// Column of a target key in ParticipantMeans::targets.
Eigen::Index target_column(const std::string& key) {
  const auto t = corpus::parse_target(key);
  if (!t) throw std::invalid_argument("unknown target '" + key + "'");
  return static_cast<Eigen::Index>(*t);
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  const auto path = (fs::path(cfg.out) / name).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  return os;
}

std::string joined(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(sep);
    out += items[i];
  }
  return out;
}

const std::array<std::string, 3> kTargetKeys{"phq9", "gad7", "suicidality"};

}  // namespace

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
  RunConfig c;
  c.assessments = cfg.get("assessments").value_or("");
  c.features = cfg.get("features").value_or("");
  c.mapping = cfg.get("mapping").value_or("");
  c.out = cfg.get("out").value_or(c.out);
  c.models = split_list(cfg.get("models").value_or(""));
  if (auto t = cfg.get("targets")) {
    c.targets.clear();
    for (const auto& key : split_list(*t)) {
      const auto target = corpus::parse_target(key);
      if (!target) throw ConfigError("config key 'targets': unknown target '" + key + "'");
      c.targets.push_back(*target);
    }
  }
  c.alpha = parse_number(cfg, "alpha", c.alpha);
  c.n_perm = parse_number(cfg, "n_perm", c.n_perm);
  c.n_boot = parse_number(cfg, "n_boot", c.n_boot);
  c.n_boot_stability = parse_number(cfg, "n_boot_stability", c.n_boot);
  c.folds = parse_number(cfg, "folds", c.folds);
  c.k_max = parse_number(cfg, "k_max", c.k_max);
  c.m = parse_number(cfg, "m", c.m);
  c.m_combined = parse_number(cfg, "m_combined", c.m_combined);
  c.seed = parse_number(cfg, "seed", c.seed);
  c.min_threshold = parse_number(cfg, "min_threshold", c.min_threshold);
  c.max_threshold = parse_number(cfg, "max_threshold", c.max_threshold);
  c.svg = parse_bool(cfg, "svg", c.svg);
  if (auto s = cfg.get("standardization")) {
    if (*s == "per_fold") {
      c.standardization = pls::Standardization::per_fold;
    } else if (*s == "global") {
      c.standardization = pls::Standardization::global;
    } else {
      throw ConfigError("config key 'standardization': expected per_fold or global, got '" + *s + "'");
    }
  }
  return c;
}

void RunConfig::validate() const {
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("config key 'alpha' must lie in (0,1)");
  if (n_perm < 1) throw ConfigError("config key 'n_perm' must be >= 1");
  if (n_boot < 1) throw ConfigError("config key 'n_boot' must be >= 1");
  if (n_boot_stability < 1) throw ConfigError("config key 'n_boot_stability' must be >= 1");
  if (folds < 2) throw ConfigError("config key 'folds' must be >= 2");
  if (k_max < 1) throw ConfigError("config key 'k_max' must be >= 1");
  if (m < 1) throw ConfigError("config key 'm' must be >= 1");
  if (m_combined < 1) throw ConfigError("config key 'm_combined' must be >= 1");
  if (targets.empty()) throw ConfigError("config key 'targets' must name at least one target");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw ConfigError("config key 'targets' lists a target twice");
    }
  }
  if (min_threshold < 2 || max_threshold < min_threshold || max_threshold > corpus::kMaxWave) {
    throw ConfigError("config keys 'min_threshold'/'max_threshold' must satisfy 2 <= min <= max <= 18");
  }
}

std::uint64_t stage_seed(const RunConfig& cfg, std::string_view stage) { return rng::derive_key(cfg.seed, stage); }

corpus::LongitudinalDataset load(const RunConfig& cfg) {
  if (cfg.assessments.empty()) throw ConfigError("missing required config key 'assessments'");
  if (cfg.features.empty()) throw ConfigError("missing required config key 'features'");
  if (cfg.mapping.empty()) throw ConfigError("missing required config key 'mapping'");
  const auto mapping = corpus::ColumnMapping::from_config(KeyValueConfig::read_file(cfg.mapping));
  auto ds = corpus::load_dataset(cfg.assessments, cfg.features, mapping);
  if (ds.empty()) throw ConfigError("dataset has no eligible participants");
  return ds;
}

ExtractSummary run_extract(const std::string& corpus_dir, const std::string& lexicon_path,
                           const std::string& out_path) {
  const auto lex = lexicon::compile_file(lexicon_path);
  if (!fs::is_directory(corpus_dir)) throw ConfigError("corpus directory '" + corpus_dir + "' not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + out_path + "'");
  std::vector<std::string> header{"document", "word_count", "words_per_sentence", "dictionary_words"};
  for (const auto& c : lex.categories()) header.push_back(c.name);
  csv::write_row(os, header);

  ExtractSummary summary;
  for (const auto& path : files) {
    std::string text;
    try {
      text = csv::read_text_file(path.string());
    } catch (const std::exception& e) {
      ++summary.failed;
      log::warn("extract: " + std::string(e.what()));
      continue;
    }
    const auto r = lexicon::extract(text, lex);
    std::vector<std::string> row{path.filename().string(), std::to_string(r.word_count),
                                 csv::number(r.words_per_sentence, 4), csv::number(r.dictionary_coverage, 4)};
    for (double v : r.category_percent) row.push_back(csv::number(v, 4));
    csv::write_row(os, row);
    ++summary.documents;
  }
  return summary;
}

BetweenResult between_analysis(const corpus::ParticipantMeans& means, const RunConfig& cfg) {
  BetweenResult out;
  out.feature_names = means.feature_names;
  out.targets = cfg.targets;
  Eigen::MatrixXd targets(means.targets.rows(), static_cast<Eigen::Index>(cfg.targets.size()));
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    targets.col(static_cast<Eigen::Index>(k)) = means.targets.col(static_cast<Eigen::Index>(cfg.targets[k]));
  }
  out.permutation = stats::max_stat_permutation(means.features, targets, cfg.n_perm, cfg.alpha,
                                                stage_seed(cfg, "between.permutation"));
  for (const auto& w : out.permutation.warnings) log::warn(w);
  const Eigen::Index p = means.features.cols();
  const Eigen::Index q = targets.cols();
  out.ci.assign(static_cast<std::size_t>(p), std::vector<stats::ConfidenceInterval>(static_cast<std::size_t>(q)));
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd x = means.features.col(j);
    for (Eigen::Index k = 0; k < q; ++k) {
      const Eigen::VectorXd y = targets.col(k);
      const int tk = static_cast<int>(cfg.targets[static_cast<std::size_t>(k)]);
      auto& ci = out.ci[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      try {
        ci = stats::bootstrap_rho_ci(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                                     std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), cfg.n_boot,
                                     0.95, stage_seed(cfg, "between.ci." + std::to_string(j) + "." + std::to_string(tk)));
      } catch (const NumericalError& e) {
        ci.lower = ci.upper = std::nan("");
        log::warn("confidence interval for '" + means.feature_names[static_cast<std::size_t>(j)] + "': " + e.what());
      }
    }
  }
  return out;
}

BetweenResult run_between(const RunConfig& cfg) {
  cfg.validate();
  const auto ds = load(cfg);
  const auto means = corpus::participant_means(ds);
  auto result = between_analysis(means, cfg);
  const auto& perm = result.permutation;

  {
    auto os = open_out(cfg, "between_report.csv");
    csv::write_row(os, {"target", "feature", "rho", "ci_lower", "ci_upper", "p_uncorr", "p_corr", "significant"});
    for (Eigen::Index k = 0; k < perm.rho.cols(); ++k) {
      for (Eigen::Index j = 0; j < perm.rho.rows(); ++j) {
        const auto& ci = result.ci[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        csv::write_row(os, {std::string(corpus::target_key(result.targets[static_cast<std::size_t>(k)])),
                            result.feature_names[static_cast<std::size_t>(j)],
                            csv::number(perm.rho(j, k)), csv::number(ci.lower), csv::number(ci.upper),
                            csv::number(perm.p_uncorr(j, k)), csv::number(perm.p_corr(j, k)),
                            perm.significant(j, k) ? "1" : "0"});
      }
    }
  }
  {
    auto os = open_out(cfg, "null_max_stats.csv");
    csv::write_row(os, {"permutation", "max_abs_rho"});
    for (std::size_t i = 0; i < perm.null_max_stats.size(); ++i) {
      csv::write_row(os, {std::to_string(i), csv::number(perm.null_max_stats[i])});
    }
  }
  {
    constexpr int kBins = 50;
    std::vector<std::size_t> counts(kBins, 0);
    for (double v : perm.null_max_stats) counts[static_cast<std::size_t>(std::min(kBins - 1, static_cast<int>(v * kBins)))]++;
    auto os = open_out(cfg, "null_max_histogram.csv");
    csv::write_row(os, {"bin_lower", "bin_upper", "count"});
    for (int b = 0; b < kBins; ++b) {
      csv::write_row(os, {csv::number(static_cast<double>(b) / kBins, 2), csv::number(static_cast<double>(b + 1) / kBins, 2),
                          std::to_string(counts[static_cast<std::size_t>(b)])});
    }
  }
  {
    std::vector<std::string> significant;
    for (Eigen::Index k = 0; k < perm.rho.cols(); ++k) {
      for (Eigen::Index j = 0; j < perm.rho.rows(); ++j) {
        if (perm.significant(j, k)) {
          significant.push_back(result.feature_names[static_cast<std::size_t>(j)] + "|" +
                                std::string(corpus::target_key(result.targets[static_cast<std::size_t>(k)])));
        }
      }
    }
    auto os = open_out(cfg, "permutation_summary.csv");
    csv::write_row(os, {"key", "value"});
    csv::write_row(os, {"n_participants", std::to_string(means.features.rows())});
    csv::write_row(os, {"n_comparisons", std::to_string(perm.rho.size())});
    csv::write_row(os, {"n_perm", std::to_string(perm.n_perm)});
    csv::write_row(os, {"n_boot", std::to_string(cfg.n_boot)});
    csv::write_row(os, {"alpha", csv::number(perm.alpha, 4)});
    csv::write_row(os, {"seed", std::to_string(cfg.seed)});
    csv::write_row(os, {"critical_value", csv::number(perm.critical_value)});
    csv::write_row(os, {"n_significant", std::to_string(significant.size())});
    csv::write_row(os, {"significant", joined(significant, ';')});
    csv::write_row(os, {"constant_columns", std::to_string(perm.warnings.size())});
  }
  return result;
}

PlsResults pls_analysis(const corpus::ParticipantMeans& means, const RunConfig& cfg) {
  PlsResults out;
  pls::PipelineOptions opt;
  opt.cv.k_max = cfg.k_max;
  opt.cv.folds = cfg.folds;
  opt.cv.seed = stage_seed(cfg, "pls.cv");
  opt.cv.standardization = cfg.standardization;
  opt.n_boot = cfg.n_boot;
  const std::vector<std::string> all_targets(kTargetKeys.begin(), kTargetKeys.end());
  const auto p = static_cast<std::size_t>(means.features.cols());
  const std::size_t m = std::min(cfg.m, p), m_combined = std::min(cfg.m_combined, p);
  if (m < cfg.m || m_combined < cfg.m_combined) {
    log::warn("reduced model size capped at the " + std::to_string(p) + " available feature(s)");
  }

  for (const auto target : cfg.targets) {
    const auto t = static_cast<std::size_t>(target);
    opt.seed = stage_seed(cfg, "pls." + kTargetKeys[t]);
    const Eigen::MatrixXd y = means.targets.col(static_cast<Eigen::Index>(t));
    out.names.push_back(kTargetKeys[t]);
    out.runs.push_back(pls::reduced_model(means.features, y, m, cfg.n_boot_stability, opt, means.feature_names,
                                          {kTargetKeys[t]}));
  }
  if (cfg.targets.size() == 3) {
    opt.seed = stage_seed(cfg, "pls.combined");
    out.names.push_back("combined");
    out.runs.push_back(pls::combined_model(means.features, means.targets, m_combined, cfg.n_boot_stability, opt,
                                           means.feature_names, all_targets));
  }
  return out;
}

PlsResults run_pls(const RunConfig& cfg) {
  cfg.validate();
  const auto ds = load(cfg);
  const auto means = corpus::participant_means(ds);
  auto results = pls_analysis(means, cfg);

  auto summary = open_out(cfg, "pls_summary.csv");
  csv::write_row(summary, {"analysis", "model", "target", "n_features", "features", "selected_k", "fit_k", "mse0",
                           "mse_fit", "mse_change_selected_pct", "mse_change_fit_pct", "r_cv", "r_cv_ci_lower",
                           "r_cv_ci_upper", "r2_cv", "r_in_sample", "standardization"});

  for (std::size_t a = 0; a < results.names.size(); ++a) {
    const auto& name = results.names[a];
    const auto& res = results.runs[a];
    {
      auto os = open_out(cfg, "pls_stability_" + name + ".csv");
      csv::write_row(os, {"rank", "feature", "z", "mean_loading", "sd_loading"});
      for (std::size_t i = 0; i < res.stability.ranking.size(); ++i) {
        const auto j = res.stability.ranking[i];
        const auto e = static_cast<Eigen::Index>(j);
        csv::write_row(os, {std::to_string(i + 1), means.feature_names[j], csv::number(res.stability.z_scores(e)),
                            csv::number(res.stability.mean_loading(e)), csv::number(res.stability.sd_loading(e))});
      }
    }
    {
      auto os = open_out(cfg, "pls_cv_" + name + ".csv");
      csv::write_row(os, {"k", "mse_full", "mse_reduced"});
      const auto kmax = std::max(res.full.curve.mse.size(), res.reduced.curve.mse.size());
      for (std::size_t k = 0; k < kmax; ++k) {
        const double f = k < res.full.curve.mse.size() ? res.full.curve.mse[k] : std::nan("");
        const double r = k < res.reduced.curve.mse.size() ? res.reduced.curve.mse[k] : std::nan("");
        csv::write_row(os, {std::to_string(k), csv::number(f), csv::number(r)});
      }
    }
    for (const auto* run : {&res.full, &res.reduced}) {
      const std::string model = run == &res.full ? "full" : "reduced";
      const auto& mdl = run->model;
      pls::save_model((fs::path(cfg.out) / ("model_" + name + "_" + model + ".model")).string(), mdl);
      {
        auto os = open_out(cfg, "pls_beta_" + name + "_" + model + ".csv");
        std::vector<std::string> header{"feature"};
        for (const auto& t : mdl.target_names) header.push_back(t);
        csv::write_row(os, header);
        for (Eigen::Index j = 0; j < mdl.beta.rows(); ++j) {
          std::vector<std::string> row{mdl.feature_names[static_cast<std::size_t>(j)]};
          for (Eigen::Index k = 0; k < mdl.beta.cols(); ++k) row.push_back(csv::number(mdl.beta(j, k)));
          csv::write_row(os, row);
        }
      }
      {
        auto os = open_out(cfg, "pls_pred_" + name + "_" + model + ".csv");
        csv::write_row(os, {"participant", "target", "observed", "predicted_cv", "predicted_in_sample"});
        for (Eigen::Index k = 0; k < run->cv_prediction.cols(); ++k) {
          const Eigen::Index col = target_column(mdl.target_names[static_cast<std::size_t>(k)]);
          for (Eigen::Index i = 0; i < run->cv_prediction.rows(); ++i) {
            csv::write_row(os, {means.ids[static_cast<std::size_t>(i)], mdl.target_names[static_cast<std::size_t>(k)],
                                csv::number(means.targets(i, col), 4), csv::number(run->cv_prediction(i, k)),
                                csv::number(run->in_sample_prediction(i, k))});
          }
        }
      }
      std::vector<std::string> used;
      for (auto j : run->features) used.push_back(means.feature_names[j]);
      const auto& pr = run->prediction;
      for (std::size_t k = 0; k < pr.r_cv.size(); ++k) {
        csv::write_row(summary,
                       {name, model, mdl.target_names[k], std::to_string(run->features.size()),
                        run->features.size() <= 10 ? joined(used, ';') : "all", std::to_string(run->curve.selected_k),
                        std::to_string(run->fit_k), csv::number(run->curve.mse[0]),
                        csv::number(run->curve.mse[static_cast<std::size_t>(run->fit_k)]),
                        csv::number(run->mse_change_selected(), 3), csv::number(run->mse_change_fit(), 3),
                        csv::number(pr.r_cv[k]), csv::number(pr.r_cv_ci[k].lower), csv::number(pr.r_cv_ci[k].upper),
                        csv::number(pr.r_cv[k] * pr.r_cv[k]), csv::number(pr.r_in_sample[k]),
                        cfg.standardization == pls::Standardization::per_fold ? "per_fold" : "global"});
      }
      if (pr.r_cv.size() > 1) {
        csv::write_row(summary, {name, model, "pooled", std::to_string(run->features.size()),
                                 run->features.size() <= 10 ? joined(used, ';') : "all",
                                 std::to_string(run->curve.selected_k), std::to_string(run->fit_k),
                                 csv::number(run->curve.mse[0]),
                                 csv::number(run->curve.mse[static_cast<std::size_t>(run->fit_k)]),
                                 csv::number(run->mse_change_selected(), 3), csv::number(run->mse_change_fit(), 3),
                                 csv::number(pr.r_pooled), "NA", "NA", csv::number(pr.r2_pooled), "NA",
                                 cfg.standardization == pls::Standardization::per_fold ? "per_fold" : "global"});
      }
      if (cfg.svg) {
        for (Eigen::Index k = 0; k < run->cv_prediction.cols(); ++k) {
          const auto target = mdl.target_names[static_cast<std::size_t>(k)];
          const Eigen::VectorXd obs = means.targets.col(target_column(target));
          svg::write_scatter((fs::path(cfg.out) / ("pls_pred_" + name + "_" + model + "_" + target + ".svg")).string(),
                             run->cv_prediction.col(k), obs, name + " " + model + " (" + target + ")",
                             "predicted (cross-validated)", "observed");
        }
      }
    }
  }
  return results;
}

void run_within(const RunConfig& cfg) {
  cfg.validate();
  const auto ds = load(cfg);
  std::vector<std::string> paths = cfg.models;
  if (paths.empty()) {
    for (const std::string name : {"phq9", "gad7", "suicidality", "combined"}) {
      for (const std::string model : {"reduced", "full"}) {
        const auto p = fs::path(cfg.out) / ("model_" + name + "_" + model + ".model");
        if (fs::exists(p)) paths.push_back(p.string());
      }
    }
  }
  if (paths.empty()) throw ConfigError("no model files given and none found in '" + cfg.out + "' (run `pls` first)");

  for (const auto& path : paths) {
    const auto model = pls::load_model(path);
    const auto stem = fs::path(path).stem().string();
    for (const auto& tname : model.target_names) {
      const auto target = corpus::parse_target(tname);
      if (!target) throw ConfigError("model '" + path + "' predicts unknown target '" + tname + "'");
      const auto report = longitudinal::within_subject(model, ds, *target, cfg.min_threshold, cfg.max_threshold);
      const std::string base = "within_" + stem + "_" + std::string(corpus::target_key(*target));
      {
        auto os = open_out(cfg, base + ".csv");
        longitudinal::write_thresholds(os, report);
      }
      {
        auto os = open_out(cfg, base + "_participants.csv");
        longitudinal::write_participants(os, report);
      }
    }
  }
}

void run_report(const RunConfig& cfg, bool have_dataset) {
  std::vector<std::vector<std::string>> rows;
  auto add = [&](std::string section, std::string key, std::string value) {
    rows.push_back({std::move(section), std::move(key), std::move(value)});
  };

  if (have_dataset) {
    const auto ds = load(cfg);
    const auto s = corpus::summarize(ds);
    {
      auto os = open_out(cfg, "cohort_summary.csv");
      corpus::write_summary(os, s);
    }
    {
      auto os = open_out(cfg, "cohort_histogram.csv");
      corpus::write_histogram(os, s);
    }
    {
      auto os = open_out(cfg, "cohort_intra_sd.csv");
      corpus::write_intra_sd(os, s);
    }
    std::ostringstream ss;
    corpus::write_summary(ss, s);
    const auto table = csv::parse(ss.str());
    for (const auto& r : table.rows) add("cohort", r[0], r[1]);
    const auto means = corpus::participant_means(ds);
    add("cohort", "n_features", std::to_string(means.features.cols()));
  } else {
    add("cohort", "status", "missing: no dataset configured");
  }

  auto read_if = [&](const std::string& name) -> std::optional<csv::Table> {
    const auto p = fs::path(cfg.out) / name;
    if (!fs::exists(p)) {
      add("gap", name, "missing");
      return std::nullopt;
    }
    return csv::read_file(p.string());
  };

  if (const auto t = read_if("permutation_summary.csv")) {
    for (const auto& r : t->rows) add("between", r[0], r[1]);
  }
  if (const auto t = read_if("between_report.csv")) {
    for (const auto& r : t->rows) {
      if (r[7] == "1") add("between.significant", r[1] + "|" + r[0], "rho=" + r[2] + " p_corr=" + r[6]);
    }
  }
  if (const auto t = read_if("pls_summary.csv")) {
    for (const auto& r : t->rows) {
      add("pls", r[0] + "." + r[1] + "." + r[2],
          "k=" + r[6] + " mse_change_pct=" + r[10] + " r_cv=" + r[11] + " ci=[" + r[12] + "," + r[13] + "]");
    }
  }
  std::vector<std::string> within;
  if (fs::is_directory(cfg.out)) {
    for (const auto& e : fs::directory_iterator(cfg.out)) {
      const auto name = e.path().filename().string();
      if (name.starts_with("within_") && name.ends_with(".csv") && !name.ends_with("_participants.csv")) {
        within.push_back(name);
      }
    }
  }
  std::sort(within.begin(), within.end());
  if (within.empty()) add("gap", "within_*.csv", "missing");
  for (const auto& name : within) {
    const auto t = csv::read_file((fs::path(cfg.out) / name).string());
    for (const auto& r : t.rows) {
      add("within." + name.substr(7, name.size() - 11), "n>=" + r[1],
          "contributing=" + r[4] + " mean_r=" + r[6] + " ci=[" + r[7] + "," + r[8] + "] p=" + r[14]);
    }
  }

  auto os = open_out(cfg, "summary.csv");
  csv::write_row(os, {"section", "key", "value"});
  for (const auto& r : rows) csv::write_row(os, r);
}

}  // namespace lingstat::pipeline
