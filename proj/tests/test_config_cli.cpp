#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "surecvlab/config.hpp"
#include "surecvlab/csvio.hpp"

using namespace surecv;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SURECVLAB_CLI_PATH;
const std::string kSource = SURECVLAB_SOURCE_DIR;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& envPrefix = "") {
  static int counter = 0;
  const fs::path dir = fs::path("cli_tmp");
  fs::create_directories(dir);
  const fs::path o = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path e = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      envPrefix + kCli + " " + args + " >" + o.string() + " 2>" + e.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(rc);
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

std::string cfg_path(const std::string& name) { return kSource + "/configs/" + name; }
std::string ref_dir() { return kSource + "/reference"; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parser: values, comments, overlays") {
  const fs::path p = fs::path("cli_tmp") / "parse.cfg";
  fs::create_directories(p.parent_path());
  std::ofstream(p) << "# comment\n"
                      "alpha = 1.5   # trailing comment\n"
                      "name=hello\n"
                      "list = 1, 2.5 ,3\n"
                      "mat = 1,0;0,2\n";
  StudyConfig cfg = StudyConfig::fromFile(p.string());
  CHECK(cfg.getReal("alpha", 0.0, 0.0, 10.0) == 1.5);
  CHECK(cfg.getString("name", "") == "hello");
  const auto list = cfg.getRealList("list", {});
  REQUIRE(list.size() == 3);
  CHECK(list[1] == 2.5);
  const Mat m = cfg.getMatrix("mat", 2, "identity");
  CHECK(m(1, 1) == 2.0);
  cfg.requireAllConsumed();

  cfg.overlay("alpha", "2.5");
  CHECK(cfg.getReal("alpha", 0.0, 0.0, 10.0) == 2.5);
}

TEST_CASE("config parser: rejections") {
  const fs::path p = fs::path("cli_tmp") / "bad.cfg";
  fs::create_directories(p.parent_path());
  std::ofstream(p) << "a = 1\na = 2\n";
  CHECK_THROWS_AS(StudyConfig::fromFile(p.string()), ConfigError);  // duplicate key

  StudyConfig cfg = StudyConfig::empty();
  cfg.overlay("known", "1");
  cfg.overlay("mystery", "2");
  cfg.getInt("known", 0, 0, 10);
  CHECK_THROWS_WITH_AS(cfg.requireAllConsumed(), doctest::Contains("mystery"), ConfigError);

  StudyConfig r = StudyConfig::empty();
  r.overlay("x", "5");
  CHECK_THROWS_AS(r.getReal("x", 0.0, 0.0, 1.0), ConfigError);  // out of range
  r.overlay("v", "1,2");
  CHECK_THROWS_AS(r.requireVector("v", 3), ConfigError);  // wrong length
  r.overlay("b", "maybe");
  CHECK_THROWS_AS(r.getBool("b", false), ConfigError);
}

TEST_CASE("parse_grid: list, range, and conflicts") {
  StudyConfig cfg = StudyConfig::empty();
  cfg.overlay("lambdas", "0.1,0.2,0.4");
  CHECK(parse_grid(cfg, "lambda", true).size() == 3);

  StudyConfig r = StudyConfig::empty();
  r.overlay("lambdaMin", "1");
  r.overlay("lambdaMax", "100");
  r.overlay("lambdaCount", "3");
  r.overlay("lambdaScale", "log");
  const auto g = parse_grid(r, "lambda", true);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-12));

  StudyConfig both = StudyConfig::empty();
  both.overlay("lambdas", "1");
  both.overlay("lambdaMin", "0");
  CHECK_THROWS_AS(parse_grid(both, "lambda", true), ConfigError);
}

TEST_CASE("fmt_double is locale-independent full precision") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(1.0 / 3.0).size() >= 17);
  const double x = 0.1 + 0.2;
  CHECK(std::stod(fmt_double(x)) == x);  // round trip
}

TEST_CASE("cli: prox-eval with the zero grid emits zero displacements") {
  const RunResult r = run_cli(
      "prox-eval --set k=2 --set penalty=ridge --set theta=1.0,2.0 --set lambdas=0");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "lambda");
  CHECK(std::stod(rows[1][3]) == 0.0);  // g_0
  CHECK(std::stod(rows[1][4]) == 0.0);  // g_1
}

TEST_CASE("cli: prox-eval on the tied lasso instance walks four sign patterns") {
  const RunResult r = run_cli(
      "prox-eval --set k=3 --set penalty=lasso "
      "--set theta=0.35355339059327379,1.0606601717798212,2 "
      "--set lambdaMin=0.01 --set lambdaMax=2.4 --set lambdaCount=200");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  std::set<std::string> patterns;
  for (std::size_t i = 1; i < rows.size(); ++i)
    patterns.insert(rows[i][7] + rows[i][8] + rows[i][9]);  // eta columns
  CHECK(patterns.size() == 4);
}

TEST_CASE("cli: malformed config key is named, exit 2") {
  const RunResult r = run_cli("prox-eval --set k=1 --set theta=1 --set lambdas=0 --set bogusKey=3");
  CHECK(r.code == 2);
  CHECK(r.err.find("bogusKey") != std::string::npos);
}

TEST_CASE("cli: empty lambda grid rejected, exit 2") {
  const RunResult r = run_cli(
      "sure-landscape --set k=1 --set theta=3 --set lambdaMin=0 --set lambdaMax=1 --set lambdaCount=0");
  CHECK(r.code == 2);
}

TEST_CASE("cli: sure-landscape reproduces both figure instances under --check") {
  const RunResult ridge = run_cli("sure-landscape --config " + cfg_path("figure2_ridge.cfg") +
                                  " --check --set referenceDir=" + ref_dir() +
                                  " --out cli_tmp/fig_ridge.csv");
  CHECK(ridge.code == 0);
  CHECK(ridge.err.find("localMinCount=2") != std::string::npos);

  const RunResult lasso = run_cli("sure-landscape --config " + cfg_path("figure2_lasso.cfg") +
                                  " --check --set referenceDir=" + ref_dir() +
                                  " --out cli_tmp/fig_lasso.csv");
  CHECK(lasso.code == 0);
  CHECK(lasso.err.find("globalMinCount=2") != std::string::npos);
}

TEST_CASE("cli: scalar ridge landscape is unimodal") {
  const RunResult r = run_cli(
      "sure-landscape --set k=1 --set penalty=ridge --set theta=3 "
      "--set lambdaMin=0 --set lambdaMax=10 --set lambdaCount=50");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("localMinCount=1") != std::string::npos);
}

TEST_CASE("cli: convergence-study input validation") {
  const std::string base = "convergence-study --config " + cfg_path("convergence_study.cfg");
  CHECK(run_cli(base + " --set replications=0").code == 2);
  const RunResult r = run_cli(base + " --set nList=2,800");
  CHECK(r.code == 2);
  CHECK(r.err.find("exceed k") != std::string::npos);
}

TEST_CASE("cli: convergence-study emits the documented columns") {
  const RunResult r = run_cli("convergence-study --config " + cfg_path("convergence_study.cfg") +
                              " --set replications=3 --set nList=50,100");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 7);  // header + 2 sizes x 3 reps
  CHECK(rows[0] == std::vector<std::string>({"n", "replication", "rawGap", "centeredGap",
                                             "argminCv", "argminSure", "lambdaStarAgrees"}));
}

TEST_CASE("cli: sawtooth rejects ridge penalties and passes its reference") {
  const RunResult bad = run_cli("sawtooth --config " + cfg_path("sawtooth_orthogonal.cfg") +
                                " --set penalty=ridge");
  CHECK(bad.code == 2);

  const RunResult good = run_cli("sawtooth --config " + cfg_path("sawtooth_orthogonal.cfg") +
                                 " --check --set referenceDir=" + ref_dir());
  CHECK(good.code == 0);
  const auto rows = parse_csv(good.out);
  REQUIRE(rows.size() == 37);
  int prev = 1 << 30;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int idx = std::stoi(rows[i][2]);
    CHECK(idx <= prev);
    prev = idx;
  }
  const RunResult single = run_cli("sawtooth --config " + cfg_path("sawtooth_orthogonal.cfg") +
                                   " --set RMin=1.0 --set RMax=1.0 --set RCount=1");
  REQUIRE(single.code == 0);
  CHECK(parse_csv(single.out).size() == 2);
}

TEST_CASE("cli: js-figure smoke run and failed check exits 4") {
  const RunResult r = run_cli("js-figure --set reps=2000 --set normThetaMax=0.5");
  REQUIRE(r.code == 0);
  CHECK(parse_csv(r.out).size() == 7);  // header + 6 points

  const RunResult bad = run_cli("js-figure --set reps=2000 --set normThetaMax=0.5 --check --set referenceDir=" +
                                ref_dir());
  CHECK(bad.code == 4);  // row count differs from the 61-point reference
}

TEST_CASE("cli: risk-curve single point emits one row per estimator") {
  const RunResult r = run_cli(
      "risk-curve --set k=3 --set estimators=cv,limit,js-plain --set normThetas=1.0 "
      "--set lambdas=0.1,1.0 --set n=50 --set replications=20 --set jsReps=2000");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][1] == "cv");
  CHECK(rows[2][1] == "limit");
  CHECK(rows[3][1] == "js-plain");
  CHECK(rows[2][2] == "limit");

  const RunResult bad = run_cli(
      "risk-curve --set k=3 --set estimators=banana --set normThetas=1.0 --set replications=5");
  CHECK(bad.code == 2);
}

TEST_CASE("cli: outputs are byte-stable across reruns and thread counts") {
  const std::string cmd =
      "risk-curve --set k=2 --set estimators=cv,limit --set normThetas=0.5,1.5 "
      "--set lambdas=0.1,0.5,2.0 --set n=60 --set replications=40 --set masterSeed=7";
  const RunResult a = run_cli(cmd + " --threads 1");
  const RunResult b = run_cli(cmd + " --threads 1");
  const RunResult c = run_cli(cmd + " --threads 3");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("cli: SURECVLAB_SEED environment variable overrides masterSeed") {
  const std::string cmd = "cv-curve --set model=linear --set k=2 --set theta0=1,0 "
                          "--set n=40 --set lambdas=0.1,1.0 --set masterSeed=1";
  const RunResult base = run_cli(cmd);
  const RunResult same = run_cli(cmd, "SURECVLAB_SEED=1 ");
  const RunResult diff = run_cli(cmd, "SURECVLAB_SEED=999 ");
  REQUIRE(base.code == 0);
  CHECK(base.out == same.out);
  CHECK(base.out != diff.out);
}

TEST_CASE("cli: tune returns the penalized fit at the tuned lambda") {
  const RunResult r = run_cli(
      "tune --set model=linear --set k=2 --set theta0=2,0 --set n=100 "
      "--set lambdas=0.01,0.1,1.0,10.0 --set masterSeed=4");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].size() == 3);  // lambdaStar + 2 coefficients
  const double lambdaStar = std::stod(rows[1][0]);
  CHECK(lambdaStar >= 0.01);
  CHECK(lambdaStar <= 10.0);
}
