// Writes a synthetic cohort (assessments.csv, features.csv, mapping.cfg) for demos.

#include <CLI11.hpp>

#include "../tests/support/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic longitudinal cohort generator"};
  std::string out = "demo";
  lingstat::synthetic::CohortOptions opt;
  app.add_option("--out", out, "output directory");
  app.add_option("--participants", opt.participants);
  app.add_option("--features", opt.features);
  app.add_option("--seed", opt.seed);
  app.add_option("--signal", opt.signal, "between-subject signal strength");
  app.add_option("--within-mean", opt.within_mean, "mean within-subject slope");
  app.add_option("--within-sd", opt.within_sd, "SD of within-subject slopes");
  CLI11_PARSE(app, argc, argv);
  lingstat::synthetic::write_cohort(out, opt);
  return 0;
}
