#include "lingstat/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "lingstat/error.hpp"
#include "lingstat/log.hpp"

namespace lingstat::corpus {

std::string_view target_name(Target t) {
  switch (t) {
    case Target::phq9: return "PHQ-9";
    case Target::gad7: return "GAD-7";
    case Target::suicidality: return "suicidality";
  }
  return "";
}

std::string_view target_key(Target t) {
  switch (t) {
    case Target::phq9: return "phq9";
    case Target::gad7: return "gad7";
    case Target::suicidality: return "suicidality";
  }
  return "";
}

std::optional<Target> parse_target(std::string_view s) {
  for (Target t : kTargets) {
    if (s == target_key(t) || s == target_name(t)) return t;
  }
  return std::nullopt;
}

double Assessment::score(Target t) const {
  switch (t) {
    case Target::phq9: return phq9;
    case Target::gad7: return gad7;
    case Target::suicidality: return suicidality;
  }
  return 0;
}

std::size_t LongitudinalDataset::n_records() const {
  std::size_t n = 0;
  for (const auto& p : participants) n += p.records.size();
  return n;
}

ColumnMapping ColumnMapping::from_config(const KeyValueConfig& cfg) {
  ColumnMapping m;
  m.a_participant = cfg.require("assessments.participant");
  m.a_wave = cfg.require("assessments.wave");
  m.a_phq9 = cfg.require("assessments.phq9");
  m.a_gad7 = cfg.require("assessments.gad7");
  m.a_suicidality = cfg.require("assessments.suicidality");
  m.a_date = cfg.get("assessments.date").value_or("");
  m.f_participant = cfg.require("features.participant");
  m.f_wave = cfg.get("features.wave").value_or("");
  m.f_date = cfg.get("features.date").value_or("");
  if (m.f_wave.empty() == m.f_date.empty()) {
    throw ConfigError("exactly one of 'features.wave' or 'features.date' must be set");
  }
  if (!m.f_date.empty() && m.a_date.empty()) {
    throw ConfigError("missing required config key 'assessments.date' (needed by features.date)");
  }
  const auto cols = cfg.get("features.columns").value_or("*");
  if (trim(cols) != "*") m.f_columns = split_list(cols);
  m.f_exclude = split_list(cfg.get("features.exclude").value_or(""));
  const auto pct = cfg.get("features.percent").value_or("");
  if (trim(pct) == "*") {
    m.f_percent_all = true;
  } else {
    m.f_percent = split_list(pct);
  }
  m.f_percent_exclude = split_list(cfg.get("features.percent_exclude").value_or(""));
  if (auto w = cfg.get("window.days")) {
    int days = 0;
    auto [ptr, ec] = std::from_chars(w->data(), w->data() + w->size(), days);
    if (ec != std::errc() || ptr != w->data() + w->size() || days < 1) {
      throw ConfigError("config key 'window.days' must be a positive integer");
    }
    m.window_days = days;
  }
  return m;
}

namespace {

std::size_t require_column(const csv::Table& t, const std::string& name, std::string_view file) {
  if (auto c = t.column(name)) return *c;
  throw ConfigError("column '" + name + "' not found in " + std::string(file) + " file");
}

std::optional<double> parse_double(std::string_view s) {
  const auto str = trim(s);
  if (str.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
  if (ec != std::errc() || ptr != str.data() + str.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

int parse_score(std::string_view s, int lo, int hi, std::string_view what, std::size_t line) {
  const auto v = parse_double(s);
  if (!v || *v != std::floor(*v) || *v < lo || *v > hi) {
    throw ValidationError("line " + std::to_string(line) + ": " + std::string(what) + " value '" +
                              trim(s) + "' outside " + std::to_string(lo) + ".." +
                              std::to_string(hi),
                          line);
  }
  return static_cast<int>(*v);
}

// YYYY-MM-DD (time suffix after 'T' or ' ' ignored) -> days since epoch.
std::optional<int> parse_date(std::string_view s) {
  const auto str = trim(s);
  if (str.size() < 10 || str[4] != '-' || str[7] != '-') return std::nullopt;
  int y = 0;
  unsigned mo = 0, d = 0;
  if (std::from_chars(str.data(), str.data() + 4, y).ec != std::errc() ||
      std::from_chars(str.data() + 5, str.data() + 7, mo).ec != std::errc() ||
      std::from_chars(str.data() + 8, str.data() + 10, d).ec != std::errc()) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

}  // namespace

LongitudinalDataset load_dataset(const csv::Table& at, const csv::Table& ft,
                                 const ColumnMapping& m) {
  const bool by_date = !m.f_date.empty();

  const auto a_pid = require_column(at, m.a_participant, "assessments");
  const auto a_wave = require_column(at, m.a_wave, "assessments");
  const auto a_phq = require_column(at, m.a_phq9, "assessments");
  const auto a_gad = require_column(at, m.a_gad7, "assessments");
  const auto a_sui = require_column(at, m.a_suicidality, "assessments");
  const auto a_date = by_date ? require_column(at, m.a_date, "assessments") : 0;

  LongitudinalDataset ds;
  LoadStats& stats = ds.stats;

  // Participants keep the order of first appearance in the assessments file.
  std::vector<Participant> order;
  std::unordered_map<std::string, std::size_t> slot;
  std::map<std::pair<std::size_t, int>, int> assessment_day;  // (slot, wave) -> date

  for (std::size_t r = 0; r < at.rows.size(); ++r) {
    const auto& row = at.rows[r];
    const auto line = at.lines[r];
    const auto pid = trim(row[a_pid]);
    if (pid.empty()) throw ValidationError("line " + std::to_string(line) + ": empty participant id", line);
    if (trim(row[a_phq]).empty() && trim(row[a_gad]).empty() && trim(row[a_sui]).empty()) {
      ++stats.skipped_blank_assessments;
      continue;
    }
    Assessment a;
    a.participant_id = pid;
    a.wave = parse_score(row[a_wave], 1, kMaxWave, "wave", line);
    a.phq9 = parse_score(row[a_phq], 0, 27, "PHQ-9", line);
    a.gad7 = parse_score(row[a_gad], 0, 21, "GAD-7", line);
    a.suicidality = parse_score(row[a_sui], 0, 3, "suicidality", line);

    auto [it, inserted] = slot.try_emplace(pid, order.size());
    if (inserted) order.push_back(Participant{pid, {}, {}});
    auto& p = order[it->second];
    for (const auto& prev : p.assessments) {
      if (prev.wave == a.wave) {
        throw ValidationError("line " + std::to_string(line) + ": duplicate wave " +
                                  std::to_string(a.wave) + " for participant '" + pid + "'",
                              line);
      }
    }
    if (by_date) {
      const auto day = parse_date(row[a_date]);
      if (!day) throw ValidationError("line " + std::to_string(line) + ": bad date '" + trim(row[a_date]) + "'", line);
      assessment_day[{it->second, a.wave}] = *day;
    }
    p.assessments.push_back(std::move(a));
  }

  // Feature columns.
  const auto f_pid = require_column(ft, m.f_participant, "features");
  const auto f_key = require_column(ft, by_date ? m.f_date : m.f_wave, "features");
  std::vector<std::size_t> fcols;
  if (m.f_columns.empty()) {
    for (const auto& ex : m.f_exclude) require_column(ft, ex, "features");
    for (std::size_t c = 0; c < ft.header.size(); ++c) {
      if (c == f_pid || c == f_key) continue;
      if (std::find(m.f_exclude.begin(), m.f_exclude.end(), ft.header[c]) != m.f_exclude.end()) continue;
      fcols.push_back(c);
    }
  } else {
    for (const auto& name : m.f_columns) fcols.push_back(require_column(ft, name, "features"));
  }
  std::vector<bool> is_percent(fcols.size(), m.f_percent_all);
  for (const auto& name : m.f_percent) {
    const auto c = require_column(ft, name, "features");
    const auto pos = std::find(fcols.begin(), fcols.end(), c);
    if (pos == fcols.end()) throw ConfigError("percent column '" + name + "' is not a feature column");
    is_percent[static_cast<std::size_t>(pos - fcols.begin())] = true;
  }
  for (const auto& name : m.f_percent_exclude) {
    const auto c = require_column(ft, name, "features");
    const auto pos = std::find(fcols.begin(), fcols.end(), c);
    if (pos != fcols.end()) is_percent[static_cast<std::size_t>(pos - fcols.begin())] = false;
  }
  for (auto c : fcols) ds.feature_names.push_back(ft.header[c]);

  std::vector<bool> has_assessments(order.size(), true);
  std::size_t orphan_records = 0;
  std::set<std::string> orphan_ids;

  for (std::size_t r = 0; r < ft.rows.size(); ++r) {
    const auto& row = ft.rows[r];
    const auto line = ft.lines[r];
    const auto pid = trim(row[f_pid]);
    const auto it = slot.find(pid);
    if (it == slot.end()) {
      ++orphan_records;
      orphan_ids.insert(pid);
      continue;
    }
    FeatureRecord rec;
    rec.participant_id = pid;
    rec.values.reserve(fcols.size());
    bool ok = true;
    for (std::size_t j = 0; j < fcols.size() && ok; ++j) {
      const auto v = parse_double(row[fcols[j]]);
      if (!v || (is_percent[j] && (*v < 0.0 || *v > 100.0))) {
        ok = false;
      } else {
        rec.values.push_back(*v);
      }
    }
    if (!ok) {
      ++stats.rejected_records;
      log::warn("features line " + std::to_string(line) + ": unusable feature value, record rejected");
      continue;
    }

    auto& p = order[it->second];
    if (by_date) {
      const auto day = parse_date(row[f_key]);
      if (!day) {
        throw ValidationError("line " + std::to_string(line) + ": bad date '" + trim(row[f_key]) + "'", line);
      }
      // Nearest assessment on or after the post, within the window.
      int best_wave = 0;
      int best_day = 0;
      for (const auto& a : p.assessments) {
        const int ad = assessment_day.at({it->second, a.wave});
        if (*day <= ad && *day > ad - m.window_days && (best_wave == 0 || ad < best_day)) {
          best_wave = a.wave;
          best_day = ad;
        }
      }
      rec.wave = best_wave;
    } else {
      const auto v = parse_double(row[f_key]);
      if (!v || *v != std::floor(*v) || *v < 0 || *v > kMaxWave) {
        throw ValidationError("line " + std::to_string(line) + ": wave value '" + trim(row[f_key]) +
                                  "' outside 0.." + std::to_string(kMaxWave),
                              line);
      }
      rec.wave = static_cast<int>(*v);
    }
    if (rec.wave == 0) ++stats.unattributed_records;
    p.records.push_back(std::move(rec));
  }

  stats.dropped_without_assessments = orphan_ids.size();
  if (orphan_records > 0) {
    log::warn(std::to_string(orphan_ids.size()) + " participant(s) with " +
              std::to_string(orphan_records) + " feature record(s) but no assessments dropped");
  }

  for (auto& p : order) {
    if (p.records.empty()) {
      ++stats.dropped_without_records;
      continue;
    }
    std::sort(p.assessments.begin(), p.assessments.end(),
              [](const Assessment& a, const Assessment& b) { return a.wave < b.wave; });
    ds.participants.push_back(std::move(p));
  }
  if (stats.dropped_without_records > 0) {
    log::warn(std::to_string(stats.dropped_without_records) +
              " participant(s) with assessments but no feature records dropped");
  }
  return ds;
}

LongitudinalDataset load_dataset(const std::string& assessments_path,
                                 const std::string& features_path, const ColumnMapping& mapping) {
  return load_dataset(csv::read_file(assessments_path), csv::read_file(features_path), mapping);
}

ParticipantMeans participant_means(const LongitudinalDataset& ds) {
  if (ds.empty()) throw NumericalError("participant_means: dataset is empty");
  const auto n = static_cast<Eigen::Index>(ds.participants.size());
  const auto p = static_cast<Eigen::Index>(ds.feature_names.size());
  ParticipantMeans out;
  out.feature_names = ds.feature_names;
  out.features = Eigen::MatrixXd::Zero(n, p);
  out.targets = Eigen::MatrixXd::Zero(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& part = ds.participants[static_cast<std::size_t>(i)];
    out.ids.push_back(part.id);
    for (const auto& rec : part.records) {
      out.features.row(i) += Eigen::Map<const Eigen::RowVectorXd>(rec.values.data(), p);
    }
    out.features.row(i) /= static_cast<double>(part.records.size());
    for (const auto& a : part.assessments) {
      for (Target t : kTargets) out.targets(i, static_cast<int>(t)) += a.score(t);
    }
    out.targets.row(i) /= static_cast<double>(part.assessments.size());
  }
  return out;
}

namespace {

struct Moments {
  double mean, sd_sample, min, max;
};

Moments moments(const std::vector<double>& v) {
  Moments m{0, 0, 0, 0};
  if (v.empty()) return m;
  m.min = *std::min_element(v.begin(), v.end());
  m.max = *std::max_element(v.begin(), v.end());
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd_sample = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

}  // namespace

CohortSummary summarize(const LongitudinalDataset& ds) {
  if (ds.empty()) throw NumericalError("summarize: dataset is empty");
  CohortSummary s;
  s.n_participants = ds.participants.size();
  s.n_posts = ds.n_records();
  const auto means = participant_means(ds);

  std::array<std::vector<double>, 3> intra;
  for (const auto& p : ds.participants) {
    s.ids.push_back(p.id);
    s.assessment_histogram[p.assessments.size() - 1]++;
    std::array<double, 3> sd{};
    for (Target t : kTargets) {
      double mean = 0;
      for (const auto& a : p.assessments) mean += a.score(t);
      mean /= static_cast<double>(p.assessments.size());
      double ss = 0;
      for (const auto& a : p.assessments) ss += (a.score(t) - mean) * (a.score(t) - mean);
      sd[static_cast<int>(t)] = std::sqrt(ss / static_cast<double>(p.assessments.size()));
      intra[static_cast<int>(t)].push_back(sd[static_cast<int>(t)]);
    }
    s.intra_sd.push_back(sd);
  }
  for (Target t : kTargets) {
    const int k = static_cast<int>(t);
    const auto col = means.targets.col(k);
    const auto between = moments(std::vector<double>(col.begin(), col.end()));
    const auto within = moments(intra[k]);
    s.targets[k] = {between.mean,   between.sd_sample, between.min,    between.max,
                    within.mean,    within.sd_sample,  within.min,     within.max};
  }
  return s;
}

void write_summary(std::ostream& os, const CohortSummary& s) {
  csv::write_row(os, {"key", "value"});
  csv::write_row(os, {"n_participants", std::to_string(s.n_participants)});
  csv::write_row(os, {"n_posts", std::to_string(s.n_posts)});
  csv::write_row(os, {"intra_sd_convention", s.intra_sd_convention});
  for (Target t : kTargets) {
    const auto& ts = s.targets[static_cast<int>(t)];
    const std::string k(target_key(t));
    csv::write_row(os, {k + ".mean", csv::number(ts.mean, 4)});
    csv::write_row(os, {k + ".sd", csv::number(ts.sd, 4)});
    csv::write_row(os, {k + ".min", csv::number(ts.min, 4)});
    csv::write_row(os, {k + ".max", csv::number(ts.max, 4)});
    csv::write_row(os, {k + ".intra_sd.mean", csv::number(ts.intra_sd_mean, 4)});
    csv::write_row(os, {k + ".intra_sd.sd", csv::number(ts.intra_sd_sd, 4)});
    csv::write_row(os, {k + ".intra_sd.min", csv::number(ts.intra_sd_min, 4)});
    csv::write_row(os, {k + ".intra_sd.max", csv::number(ts.intra_sd_max, 4)});
  }
}

void write_histogram(std::ostream& os, const CohortSummary& s) {
  csv::write_row(os, {"n_assessments", "n_participants"});
  for (int i = 0; i < kMaxWave; ++i) {
    csv::write_row(os, {std::to_string(i + 1), std::to_string(s.assessment_histogram[i])});
  }
}

void write_intra_sd(std::ostream& os, const CohortSummary& s) {
  csv::write_row(os, {"participant", "phq9_sd", "gad7_sd", "suicidality_sd"});
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    csv::write_row(os, {s.ids[i], csv::number(s.intra_sd[i][0], 4), csv::number(s.intra_sd[i][1], 4),
                        csv::number(s.intra_sd[i][2], 4)});
  }
}

}  // namespace lingstat::corpus
