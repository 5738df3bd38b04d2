#include <doctest.h>
#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lingstat/csv.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lingstat;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("lingstat_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(LINGSTAT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

// Every regular file of `a` exists in `b` with identical bytes, and vice versa.
bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t na = 0, nb = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++na;
    const auto other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
  }
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++nb;
  return na == nb && na > 0;
}

const std::string kLexicon = std::string(LINGSTAT_DATA_DIR) + "/demo_lexicon.txt";

// Toy cohort: one feature, phq9 = 2 * f1 + 1 at every wave.
fs::path toy_cohort(int participants, int waves) {
  const auto dir = scratch("toy");
  std::ostringstream a, f;
  a << "id,wave,phq,gad,item9\n";
  f << "id,wave,f1\n";
  for (int p = 0; p < participants; ++p) {
    for (int w = 1; w <= waves; ++w) {
      const int x = (p * 7 + w * 3) % 11 + (p % 3);
      a << "s" << p << ',' << w << ',' << 2 * x + 1 << ',' << (p + w) % 22 << ',' << (p * w) % 4 << '\n';
      f << "s" << p << ',' << w << ',' << x << '\n';
    }
  }
  spit(dir / "assessments.csv", a.str());
  spit(dir / "features.csv", f.str());
  spit(dir / "mapping.cfg",
       "assessments.participant = id\nassessments.wave = wave\nassessments.phq9 = phq\n"
       "assessments.gad7 = gad\nassessments.suicidality = item9\nfeatures.participant = id\n"
       "features.wave = wave\nfeatures.columns = f1\n");
  return dir;
}

std::string data_args(const fs::path& dir) {
  return "--assessments " + (dir / "assessments.csv").string() + " --features " + (dir / "features.csv").string() +
         " --mapping " + (dir / "mapping.cfg").string();
}

}  // namespace

TEST_CASE("extract: one row per document, deterministic") {
  const auto corpus = scratch("corpus");
  spit(corpus / "a.txt", "I can't. Maybe tomorrow!");
  spit(corpus / "b.txt", "Umm, they never cried.");
  spit(corpus / "c.txt", "Perhaps we eat pizza at lunch.");
  const auto out = scratch("extract");
  REQUIRE(run("extract --corpus " + corpus.string() + " --lexicon " + kLexicon + " --out " + (out / "f1.csv").string()) == 0);
  REQUIRE(run("extract --corpus " + corpus.string() + " --lexicon " + kLexicon + " --out " + (out / "f2.csv").string()) == 0);
  const auto table = csv::read_file((out / "f1.csv").string());
  CHECK(table.rows.size() == 3);
  CHECK(table.header.front() == "document");
  CHECK(slurp(out / "f1.csv") == slurp(out / "f2.csv"));

  const auto empty = scratch("empty_corpus");
  REQUIRE(run("extract --corpus " + empty.string() + " --lexicon " + kLexicon + " --out " + (out / "e.csv").string()) == 0);
  const auto text = slurp(out / "e.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE("extract: malformed lexicon is a validation error") {
  const auto dir = scratch("badlex");
  spit(dir / "lex.txt", "%\n1\ta\n%\nword\t9\n");
  CHECK(run("extract --corpus " + dir.string() + " --lexicon " + (dir / "lex.txt").string() + " --out " +
            (dir / "o.csv").string()) == 2);
}

TEST_CASE("between: single feature, single target gives a one-row report") {
  const auto dir = toy_cohort(8, 2);
  const auto out = scratch("between_toy");
  REQUIRE(run("between " + data_args(dir) + " --targets phq9 --n-perm 200 --n-boot 100 --out " + out.string()) == 0);
  const auto t = csv::read_file((out / "between_report.csv").string());
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "phq9");
  CHECK(t.rows[0][1] == "f1");
  CHECK(std::stod(t.rows[0][2]) == doctest::Approx(1.0));
}

TEST_CASE("configuration and validation errors exit with code 2") {
  const auto dir = toy_cohort(8, 2);
  const auto out = scratch("errors");
  CHECK(run("between " + data_args(dir) + " --alpha 1.5 --out " + out.string()) == 2);
  CHECK(run("between " + data_args(dir) + " --targets nope --out " + out.string()) == 2);
  spit(dir / "bad_mapping.cfg", "assessments.participant = id\n");
  CHECK(run("between --assessments " + (dir / "assessments.csv").string() + " --features " +
            (dir / "features.csv").string() + " --mapping " + (dir / "bad_mapping.cfg").string() + " --out " +
            out.string()) == 2);
  spit(dir / "bad_scores.csv", "id,wave,phq,gad,item9\ns0,1,40,1,0\n");
  CHECK(run("between --assessments " + (dir / "bad_scores.csv").string() + " --features " +
            (dir / "features.csv").string() + " --mapping " + (dir / "mapping.cfg").string() + " --out " +
            out.string()) == 2);
}

TEST_CASE("report notes missing outputs and still succeeds") {
  const auto out = scratch("report_empty");
  REQUIRE(run("report --out " + out.string()) == 0);
  const auto t = csv::read_file((out / "summary.csv").string());
  bool gap = false;
  for (const auto& r : t.rows) gap = gap || (r[0] == "gap" && r[2] == "missing");
  CHECK(gap);
  const auto first = slurp(out / "summary.csv");
  REQUIRE(run("report --out " + out.string()) == 0);
  CHECK(slurp(out / "summary.csv") == first);
}

TEST_CASE("pls and within on a noiseless toy") {
  const auto dir = toy_cohort(12, 6);
  const auto out = scratch("pls_toy");
  REQUIRE(run("pls " + data_args(dir) + " --targets phq9 --m 1 --n-boot 200 --out " + out.string()) == 0);
  const auto t = csv::read_file((out / "pls_summary.csv").string());
  REQUIRE(t.rows.size() == 2);
  for (const auto& r : t.rows) CHECK(std::stod(r[11]) == doctest::Approx(1.0));
  REQUIRE(run("within " + data_args(dir) + " --out " + out.string()) == 0);
  const auto w = csv::read_file((out / "within_model_phq9_reduced_phq9.csv").string());
  REQUIRE(w.rows.size() == 16);
  CHECK(w.rows[0][1] == "3");
  CHECK(std::stod(w.rows[0][14]) < 1e-12);
  CHECK(std::stod(w.rows[0][6]) == doctest::Approx(1.0));
}

TEST_CASE("full pipeline is byte-identical across reruns and thread counts") {
  const auto data = scratch("cohort");
  synthetic::CohortOptions opt;
  opt.seed = 3;
  synthetic::write_cohort(data.string(), opt);
  const std::string args = data_args(data) + " --n-perm 500 --n-boot 200";
  std::vector<fs::path> outs;
  for (const std::string env : {"OMP_NUM_THREADS=1", "OMP_NUM_THREADS=4", "OMP_NUM_THREADS=4"}) {
    const auto out = scratch("det_" + std::to_string(outs.size()));
    for (const std::string cmd : {"between", "pls", "within", "report"}) {
      REQUIRE(run(cmd + " " + args + " --out " + out.string(), env) == 0);
    }
    outs.push_back(out);
  }
  CHECK(same_tree(outs[0], outs[1]));
  CHECK(same_tree(outs[1], outs[2]));
}
