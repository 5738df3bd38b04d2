#include "lingstat/longitudinal.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "lingstat/csv.hpp"
#include "lingstat/error.hpp"
#include "lingstat/stats.hpp"

namespace lingstat::longitudinal {

namespace {

Eigen::Index target_column(const pls::PlsModel& model, corpus::Target target) {
  for (std::size_t k = 0; k < model.target_names.size(); ++k) {
    const auto& name = model.target_names[k];
    if (name == corpus::target_key(target) || name == corpus::target_name(target)) return static_cast<Eigen::Index>(k);
  }
  throw std::invalid_argument("model does not predict target '" + std::string(corpus::target_key(target)) + "'");
}

std::vector<std::size_t> feature_columns(const pls::PlsModel& model, const corpus::LongitudinalDataset& ds) {
  std::vector<std::size_t> cols;
  for (const auto& name : model.feature_names) {
    std::size_t found = ds.feature_names.size();
    for (std::size_t j = 0; j < ds.feature_names.size(); ++j) {
      if (ds.feature_names[j] == name) {
        found = j;
        break;
      }
    }
    if (found == ds.feature_names.size()) throw std::invalid_argument("dataset lacks model feature '" + name + "'");
    cols.push_back(found);
  }
  return cols;
}

}  // namespace

ThresholdRow pooled_test(std::vector<double> r, double level) {
  ThresholdRow row;
  row.r = std::move(r);
  const std::size_t m = row.r.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.mean_r = row.mean_z = row.ci_lower = row.ci_upper = row.raw_ci_lower = row.raw_ci_upper = nan;
  row.t = row.df = row.p = nan;
  if (m == 0) return row;
  std::vector<double> z;
  double sum_r = 0;
  for (double v : row.r) {
    z.push_back(stats::fisher_z(v));
    sum_r += v;
  }
  row.mean_r = sum_r / static_cast<double>(m);
  if (m < 2) return row;
  stats::TTest tz;
  try {
    tz = stats::one_sample_t(z);
  } catch (const NumericalError&) {
    // Identical z values: the limit of t is infinite unless they are all zero.
    const double z0 = z.front();
    if (z0 == 0.0) return row;
    row.testable = true;
    row.mean_z = z0;
    row.t = std::copysign(std::numeric_limits<double>::infinity(), z0);
    row.df = static_cast<double>(m - 1);
    row.p = 0.0;
    row.ci_lower = row.ci_upper = std::tanh(z0);
    row.raw_ci_lower = row.raw_ci_upper = row.mean_r;
    return row;
  }
  row.testable = true;
  row.mean_z = tz.mean;
  row.t = tz.t;
  row.df = tz.df;
  row.p = tz.p_two_sided;
  const double crit = stats::t_quantile(0.5 + level / 2.0, tz.df);
  const double se_z = tz.sd / std::sqrt(static_cast<double>(m));
  row.ci_lower = std::tanh(tz.mean - crit * se_z);
  row.ci_upper = std::tanh(tz.mean + crit * se_z);
  double ss = 0;
  for (double v : row.r) ss += (v - row.mean_r) * (v - row.mean_r);
  const double se_r = std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m));
  row.raw_ci_lower = row.mean_r - crit * se_r;
  row.raw_ci_upper = row.mean_r + crit * se_r;
  return row;
}

WithinSubjectReport within_subject(const pls::PlsModel& model, const corpus::LongitudinalDataset& ds,
                                   corpus::Target target, int min_threshold, int max_threshold) {
  if (min_threshold < 2 || max_threshold < min_threshold) {
    throw std::invalid_argument("within_subject: bad threshold range");
  }
  const Eigen::Index tcol = target_column(model, target);
  const auto cols = feature_columns(model, ds);

  WithinSubjectReport report;
  report.target = target;
  for (const auto& part : ds.participants) {
    std::map<int, std::pair<Eigen::RowVectorXd, int>> by_wave;
    for (const auto& rec : part.records) {
      if (rec.wave == 0) continue;
      Eigen::RowVectorXd v(static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) v(static_cast<Eigen::Index>(j)) = rec.values[cols[j]];
      auto [it, inserted] = by_wave.try_emplace(rec.wave, v, 1);
      if (!inserted) {
        it->second.first += v;
        it->second.second += 1;
      }
    }
    ParticipantSeries s;
    s.id = part.id;
    std::vector<double> obs;
    std::vector<Eigen::RowVectorXd> rows;
    for (const auto& a : part.assessments) {
      const auto it = by_wave.find(a.wave);
      if (it == by_wave.end()) continue;
      s.waves.push_back(a.wave);
      obs.push_back(a.score(target));
      rows.push_back(it->second.first / static_cast<double>(it->second.second));
    }
    const auto k = static_cast<Eigen::Index>(rows.size());
    s.observed = Eigen::Map<const Eigen::VectorXd>(obs.data(), k);
    s.predicted.resize(k);
    if (k > 0) {
      Eigen::MatrixXd x(k, static_cast<Eigen::Index>(cols.size()));
      for (Eigen::Index i = 0; i < k; ++i) x.row(i) = rows[static_cast<std::size_t>(i)];
      s.predicted = pls::predict(model, x).col(tcol);
    }
    s.r = std::numeric_limits<double>::quiet_NaN();
    if (k < 2) {
      s.excluded = "fewer than 2 usable waves";
    } else if ((s.observed.array() - s.observed.mean()).abs().maxCoeff() == 0.0) {
      s.excluded = "constant observed score";
    } else {
      try {
        s.r = stats::pearson(std::span<const double>(s.predicted.data(), static_cast<std::size_t>(k)),
                             std::span<const double>(s.observed.data(), static_cast<std::size_t>(k)));
      } catch (const NumericalError&) {
        s.excluded = "constant prediction";
      }
    }
    report.participants.push_back(std::move(s));
  }

  for (int n = min_threshold; n <= max_threshold; ++n) {
    std::vector<double> r;
    std::size_t eligible = 0, excluded = 0;
    for (const auto& s : report.participants) {
      if (s.points() < static_cast<std::size_t>(n)) continue;
      ++eligible;
      if (std::isnan(s.r)) {
        ++excluded;
      } else {
        r.push_back(s.r);
      }
    }
    ThresholdRow row = pooled_test(std::move(r), report.level);
    row.min_points = n;
    row.n_eligible = eligible;
    row.n_excluded = excluded;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_thresholds(std::ostream& os, const WithinSubjectReport& report) {
  csv::write_row(os, {"target", "min_points", "n_eligible", "n_excluded", "n_contributing", "testable", "mean_r",
                      "ci_lower", "ci_upper", "raw_ci_lower", "raw_ci_upper", "mean_z", "t", "df", "p"});
  for (const auto& row : report.rows) {
    csv::write_row(os, {std::string(corpus::target_key(report.target)), std::to_string(row.min_points),
                        std::to_string(row.n_eligible), std::to_string(row.n_excluded),
                        std::to_string(row.n_contributing()), row.testable ? "1" : "0", csv::number(row.mean_r),
                        csv::number(row.ci_lower), csv::number(row.ci_upper), csv::number(row.raw_ci_lower),
                        csv::number(row.raw_ci_upper), csv::number(row.mean_z), csv::number(row.t),
                        csv::number(row.df, 0), csv::number(row.p)});
  }
}

void write_participants(std::ostream& os, const WithinSubjectReport& report) {
  csv::write_row(os, {"participant", "wave", "observed", "predicted", "r", "n_points", "excluded"});
  for (const auto& s : report.participants) {
    for (std::size_t i = 0; i < s.waves.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      csv::write_row(os, {s.id, std::to_string(s.waves[i]), csv::number(s.observed(e), 4),
                          csv::number(s.predicted(e)), csv::number(s.r), std::to_string(s.points()), s.excluded});
    }
  }
}

}  // namespace lingstat::longitudinal
