#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lingstat/corpus.hpp"
#include "lingstat/longitudinal.hpp"
#include "lingstat/pls.hpp"
#include "lingstat/rng.hpp"
#include "support/synthetic.hpp"

using namespace lingstat;

namespace {

// Participants with `waves` assessments each; phq9 = f(feature) per wave.
template <typename F>
corpus::LongitudinalDataset cohort(int participants, std::vector<int> waves, std::uint64_t seed, F score,
                                   bool collinear = false) {
  corpus::LongitudinalDataset ds;
  ds.feature_names = {"f1", "f2"};
  for (int p = 0; p < participants; ++p) {
    corpus::Participant part;
    part.id = "p" + std::to_string(p);
    rng::Stream s(seed, static_cast<std::uint64_t>(p));
    const int w = waves[static_cast<std::size_t>(p) % waves.size()];
    for (int t = 1; t <= w; ++t) {
      const double f1 = static_cast<double>(s.below(10));
      const double noise = synthetic::normal(s);
      const double f2 = collinear ? 0.5 * f1 + 1.0 : noise;
      corpus::Assessment a;
      a.participant_id = part.id;
      a.wave = t;
      a.phq9 = score(p, f1, s);
      a.gad7 = static_cast<int>(s.below(22));
      a.suicidality = static_cast<int>(s.below(4));
      part.assessments.push_back(a);
      part.records.push_back({part.id, t, {f1, f2}});
    }
    ds.participants.push_back(part);
  }
  return ds;
}

pls::PlsModel group_model(const corpus::LongitudinalDataset& ds) {
  const auto means = corpus::participant_means(ds);
  auto model = pls::simpls_fit(means.features, means.targets, 1);
  model.feature_names = means.feature_names;
  model.target_names = {"phq9", "gad7", "suicidality"};
  return model;
}

}  // namespace

TEST_CASE("ergodic cohort: every participant r = 1") {
  const auto ds = cohort(12, {5, 8, 18}, 1, [](int, double f1, rng::Stream&) { return static_cast<int>(2 * f1 + 3); }, true);
  const auto model = group_model(ds);
  const auto rep = longitudinal::within_subject(model, ds, corpus::Target::phq9);
  REQUIRE(rep.rows.size() == 16);
  for (const auto& s : rep.participants) {
    if (std::isnan(s.r)) continue;
    CHECK(std::abs(std::abs(s.r) - 1.0) < 1e-12);
  }
  const auto& row = rep.rows.front();
  CHECK(row.n_contributing() >= 10);
  CHECK(row.testable);
  CHECK(row.p < 1e-12);
  CHECK(std::abs(row.mean_r) == doctest::Approx(1.0));
}

TEST_CASE("thresholds: nested participant sets with unchanged r") {
  const auto ds = cohort(30, {2, 3, 4, 7, 10, 13, 18}, 2, [](int p, double f1, rng::Stream& s) {
    return static_cast<int>(f1 + (p % 3) + s.below(5));
  });
  const auto rep = longitudinal::within_subject(group_model(ds), ds, corpus::Target::phq9);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].n_eligible <= rep.rows[i - 1].n_eligible);
    CHECK(rep.rows[i].n_contributing() <= rep.rows[i - 1].n_contributing());
  }
  for (const auto& row : rep.rows) {
    std::vector<double> expected;
    for (const auto& s : rep.participants)
      if (s.points() >= static_cast<std::size_t>(row.min_points) && !std::isnan(s.r)) expected.push_back(s.r);
    CHECK(row.r == expected);
    for (double r : row.r) {
      CHECK(r >= -1.0);
      CHECK(r <= 1.0);
    }
    if (row.testable) {
      CHECK(row.ci_lower <= row.ci_upper);
      CHECK(row.raw_ci_lower <= row.raw_ci_upper);
    }
  }
  CHECK(rep.rows.back().min_points == 18);
}

TEST_CASE("r is invariant to affine rescaling of predictions") {
  const auto ds = cohort(15, {6, 9}, 3, [](int, double f1, rng::Stream& s) { return static_cast<int>(f1 + s.below(6)); });
  auto model = group_model(ds);
  const auto a = longitudinal::within_subject(model, ds, corpus::Target::phq9);
  // Scale and shift the phq9 column of the output mapping.
  model.y_scaler.sds(0) *= 3.5;
  model.y_scaler.means(0) += 40.0;
  const auto b = longitudinal::within_subject(model, ds, corpus::Target::phq9);
  for (std::size_t i = 0; i < a.participants.size(); ++i) {
    if (std::isnan(a.participants[i].r)) {
      CHECK(std::isnan(b.participants[i].r));
    } else {
      CHECK(b.participants[i].r == doctest::Approx(a.participants[i].r).epsilon(1e-12));
    }
  }
}

TEST_CASE("mismatched model and target") {
  const auto ds = cohort(6, {4}, 4, [](int, double f1, rng::Stream&) { return static_cast<int>(f1); });
  auto model = group_model(ds);
  model.target_names = {"phq9"};
  model.beta = model.beta.leftCols(1).eval();
  CHECK_THROWS_AS(longitudinal::within_subject(model, ds, corpus::Target::gad7), std::invalid_argument);
  auto other = group_model(ds);
  other.feature_names = {"f1", "missing"};
  CHECK_THROWS_AS(longitudinal::within_subject(other, ds, corpus::Target::phq9), std::invalid_argument);
}

TEST_CASE("records within a wave are averaged, unattributed ones ignored") {
  auto ds = cohort(4, {4}, 5, [](int, double f1, rng::Stream&) { return static_cast<int>(2 * f1); });
  const auto model = group_model(ds);
  auto& part = ds.participants[0];
  const auto base = longitudinal::within_subject(model, ds, corpus::Target::phq9);
  // Two records averaging to the original, plus an unattributed outlier.
  const auto orig = part.records[1].values;
  part.records[1].values = {orig[0] - 1.0, orig[1] + 2.0};
  part.records.push_back({part.id, 2, {orig[0] + 1.0, orig[1] - 2.0}});
  part.records.push_back({part.id, 0, {1000.0, 1000.0}});
  const auto rep = longitudinal::within_subject(model, ds, corpus::Target::phq9);
  CHECK(rep.participants[0].predicted.isApprox(base.participants[0].predicted, 1e-12));
  CHECK(rep.participants[0].waves == base.participants[0].waves);
}

TEST_CASE("waves without posts are not usable") {
  auto ds = cohort(3, {5}, 6, [](int, double f1, rng::Stream& s) { return static_cast<int>(f1 + s.below(3)); });
  auto& recs = ds.participants[0].records;
  recs.erase(recs.begin() + 2);
  const auto rep = longitudinal::within_subject(group_model(ds), ds, corpus::Target::phq9);
  CHECK(rep.participants[0].waves == std::vector<int>{1, 2, 4, 5});
  CHECK(rep.participants[1].points() == 5);
}

TEST_CASE("pooled test") {
  const auto row = longitudinal::pooled_test({0.5, 0.1, -0.2, 0.4});
  CHECK(row.testable);
  CHECK(row.df == 3);
  double mz = 0;
  for (double r : {0.5, 0.1, -0.2, 0.4}) mz += std::atanh(r) / 4;
  CHECK(row.mean_z == doctest::Approx(mz));
  CHECK(row.mean_r == doctest::Approx(0.2));
  CHECK(row.ci_lower < std::tanh(mz));
  CHECK(row.ci_upper > std::tanh(mz));
  CHECK_FALSE(longitudinal::pooled_test({0.3}).testable);
  CHECK_FALSE(longitudinal::pooled_test({}).testable);
  CHECK_FALSE(longitudinal::pooled_test({0.0, 0.0}).testable);
  const auto same = longitudinal::pooled_test({0.3, 0.3, 0.3});
  CHECK(same.testable);
  CHECK(same.p == 0.0);
}

TEST_CASE("non-ergodic null cohorts reject at about the nominal rate") {
  int rejections = 0, tested = 0;
  for (std::uint64_t c = 0; c < 100; ++c) {
    // Per-participant slope drawn with mean zero; the group trend is noise.
    const auto ds = cohort(38, {3, 5, 8, 12, 18}, 1000 + c, [c](int p, double f1, rng::Stream& s) {
      rng::Stream slope_stream(77 + c, static_cast<std::uint64_t>(p));
      const double slope = synthetic::normal(slope_stream) * 0.5;
      const double v = 13 + slope * (f1 - 4.5) + 2.0 * synthetic::normal(s);
      return static_cast<int>(std::clamp(std::round(v), 0.0, 27.0));
    });
    const auto rep = longitudinal::within_subject(group_model(ds), ds, corpus::Target::phq9);
    const auto& row = rep.rows.front();
    if (!row.testable) continue;
    ++tested;
    if (row.p < 0.05) ++rejections;
  }
  CHECK(tested == 100);
  CHECK(static_cast<double>(rejections) / tested <= 0.12);  // 0.05 + ~3 binomial SD
}

TEST_CASE("report writers") {
  const auto ds = cohort(5, {4}, 7, [](int, double f1, rng::Stream& s) { return static_cast<int>(f1 + s.below(4)); });
  const auto rep = longitudinal::within_subject(group_model(ds), ds, corpus::Target::phq9, 3, 5);
  std::ostringstream a, b;
  longitudinal::write_thresholds(a, rep);
  longitudinal::write_participants(b, rep);
  const std::string ta = a.str(), tb = b.str();
  CHECK(std::count(ta.begin(), ta.end(), '\n') == 4);
  CHECK(std::count(tb.begin(), tb.end(), '\n') == 21);
}
