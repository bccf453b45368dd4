// surecvlab: batch front-end for SURE / cross-validation tuning studies.
// Every command reads a flat key = value config (plus --set overrides),
// runs deterministically given masterSeed, and emits a CSV table.
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 reference mismatch in --check mode.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "surecvlab/config.hpp"
#include "surecvlab/csvio.hpp"
#include "surecvlab/cv.hpp"
#include "surecvlab/risk.hpp"

using namespace surecv;

namespace {

struct CheckFailure : std::runtime_error {
  explicit CheckFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct CommonOpts {
  std::string configPath;
  std::vector<std::string> sets;
  std::string outPath;
  bool check = false;
  int threadsFlag = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.configPath, "study configuration file (key = value lines)");
  cmd->add_option("--set", opts.sets, "override a config key, key=value (repeatable)");
  cmd->add_option("--out", opts.outPath, "output CSV path (default: stdout)");
  cmd->add_flag("--check", opts.check, "compare the output against the bundled reference table");
  cmd->add_option("--threads", opts.threadsFlag, "worker threads (0 = all cores)");
}

std::string trim_copy(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

StudyConfig load_config(const CommonOpts& opts) {
  StudyConfig cfg =
      opts.configPath.empty() ? StudyConfig::empty() : StudyConfig::fromFile(opts.configPath);
  for (const auto& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.overlay(trim_copy(s.substr(0, eq)), trim_copy(s.substr(eq + 1)));
  }
  if (opts.threadsFlag >= 0) cfg.overlay("threads", std::to_string(opts.threadsFlag));
  if (const char* env = std::getenv("SURECVLAB_SEED")) cfg.overlay("masterSeed", env);
  return cfg;
}

struct Output {
  std::ofstream file;
  std::ostream* stream = nullptr;
};

Output open_output(const CommonOpts& opts, StudyConfig& cfg) {
  Output o;
  const std::string path = opts.outPath.empty() ? cfg.getString("out", "") : opts.outPath;
  if (path.empty()) {
    o.stream = &std::cout;
  } else {
    o.file.open(path, std::ios::trunc);
    if (!o.file) throw ConfigError("cannot open output path '" + path + "'");
    o.stream = &o.file;
  }
  return o;
}

PenaltySpec parse_penalty(StudyConfig& cfg, int k) {
  const std::string kind = cfg.getString("penalty", "ridge");
  const Mat A = cfg.getMatrix("A", k, "identity");
  if (kind == "ridge") return PenaltySpec::ridge(A);
  if (kind == "lasso") return PenaltySpec::lasso(A);
  throw ConfigError("key 'penalty': expected 'ridge' or 'lasso', got '" + kind + "'");
}

LossModel parse_model(StudyConfig& cfg, int k) {
  const std::string m = cfg.getString("model", "linear");
  if (m == "linear") return LossModel{LossKind::LinearSquaredError, k};
  if (m == "logistic") return LossModel{LossKind::LogisticNll, k};
  throw ConfigError("key 'model': expected 'linear' or 'logistic', got '" + m + "'");
}

CvMode parse_mode(StudyConfig& cfg) {
  const std::string m = cfg.getString("mode", "approx");
  if (m == "approx") return CvMode::ApproxLoo;
  if (m == "exact") return CvMode::ExactLoo;
  throw ConfigError("key 'mode': expected 'approx' or 'exact', got '" + m + "'");
}

std::vector<double> require_lambda_grid(StudyConfig& cfg) {
  std::vector<double> g = parse_grid(cfg, "lambda", true);
  if (g.empty()) throw ConfigError("empty lambda grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0)) throw ConfigError("lambda grid entries must be nonnegative");
    if (i > 0 && g[i] <= g[i - 1]) throw ConfigError("lambda grid must be strictly increasing");
  }
  return g;
}

/// Reads back one of our own CSVs: header plus numeric rows.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty reference table '" + path + "'");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return {header, rows};
}

void check_against_reference(const std::string& path,
                             const std::vector<std::vector<double>>& rows, double tolerance) {
  const auto [header, ref] = read_csv(path);
  if (ref.size() != rows.size())
    throw CheckFailure("row count " + std::to_string(rows.size()) + " != reference " +
                       std::to_string(ref.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ref[i].size()) throw CheckFailure("column count mismatch at row " + std::to_string(i));
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (std::abs(rows[i][j] - ref[i][j]) > tolerance) {
        std::ostringstream msg;
        msg << "mismatch at row " << i << " column " << j << ": got " << rows[i][j]
            << ", reference " << ref[i][j] << " (tolerance " << tolerance << ")";
        throw CheckFailure(msg.str());
      }
    }
  }
}

std::string reference_path(StudyConfig& cfg, const std::string& defaultName, bool checking) {
  const std::string dir = cfg.getString("referenceDir", "reference");
  const std::string file = cfg.getString("reference", defaultName);
  if (file.empty()) {
    if (checking) throw ConfigError("--check needs a 'reference' key for this command");
    return "";
  }
  if (file.front() == '/') return file;
  return dir + "/" + file;
}

// ---------------------------------------------------------------- commands

int cmd_prox_eval(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.requireInt("k", 1, 64));
  const PenaltySpec penalty = parse_penalty(cfg, k);
  const Vec theta = cfg.requireVector("theta", k);
  const std::vector<double> grid = require_lambda_grid(cfg);
  cfg.getU64("masterSeed", 12345);  // accepted everywhere, unused here
  cfg.getInt("threads", 1, 0, 4096);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("prox-eval has no reference table for --check");

  CsvWriter csv(*out.stream);
  std::vector<std::string> cols{"lambda"};
  for (int j = 0; j < k; ++j) cols.push_back("theta_" + std::to_string(j));
  for (int j = 0; j < k; ++j) cols.push_back("g_" + std::to_string(j));
  for (int j = 0; j < k; ++j) cols.push_back("eta_" + std::to_string(j));
  cols.push_back("boundaryFlag");
  csv.header(cols);
  for (double l : grid) {
    const ProxResult r = prox(penalty, l, theta);
    std::vector<std::string> row{fmt_double(l)};
    for (int j = 0; j < k; ++j) row.push_back(fmt_double(theta[j]));
    for (int j = 0; j < k; ++j) row.push_back(fmt_double(r.g[j]));
    for (int j = 0; j < k; ++j) row.push_back(std::to_string(r.eta[j]));
    row.push_back(r.boundaryFlag ? "1" : "0");
    csv.row(row);
  }
  return 0;
}

int cmd_sure_landscape(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.requireInt("k", 1, 64));
  const PenaltySpec penalty = parse_penalty(cfg, k);
  const Vec theta = cfg.requireVector("theta", k);
  const Mat sigma = cfg.getMatrix("sigma", k, "identity");
  const std::vector<double> grid = require_lambda_grid(cfg);
  cfg.getU64("masterSeed", 12345);
  cfg.getInt("threads", 1, 0, 4096);
  const double tolerance = cfg.getReal("checkTolerance", 1e-9, 0.0, 1.0);
  const std::string refPath = reference_path(cfg, "", opts.check);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();

  const SureCurve curve = sure_curve(penalty, theta, sigma, grid);
  CsvWriter csv(*out.stream);
  csv.header({"lambda", "sure", "sureFigure"});
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double figure = curve.values[i] + double(k);
    csv.row({fmt_double(grid[i]), fmt_double(curve.values[i]), fmt_double(figure)});
    rows.push_back({grid[i], curve.values[i], figure});
  }

  // Minima diagnostics on stderr so the CSV stays clean.
  const auto minima = local_minima(penalty, theta, sigma);
  int globals = 0;
  for (const auto& m : minima) globals += m.global ? 1 : 0;
  for (const auto& m : minima)
    std::cerr << (m.global ? "globalMin" : "localMin") << " lambda=" << fmt_double(m.lambda)
              << " sure=" << fmt_double(m.value) << "\n";
  std::cerr << "localMinCount=" << minima.size() << " globalMinCount=" << globals << "\n";

  if (opts.check) check_against_reference(refPath, rows, tolerance);
  return 0;
}

int cmd_sure_min(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.requireInt("k", 1, 64));
  const PenaltySpec penalty = parse_penalty(cfg, k);
  const Vec theta = cfg.requireVector("theta", k);
  const Mat sigma = cfg.getMatrix("sigma", k, "identity");
  const std::string setKind = cfg.getString("lambdaSet", "all");
  LambdaSet set = LambdaSet::allNonneg();
  if (setKind == "grid")
    set = LambdaSet::finiteGrid(require_lambda_grid(cfg));
  else if (setKind != "all")
    throw ConfigError("key 'lambdaSet': expected 'all' or 'grid'");
  cfg.getU64("masterSeed", 12345);
  cfg.getInt("threads", 1, 0, 4096);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("sure-min has no reference table for --check");

  const MinSureResult m = minimize_sure(penalty, theta, sigma, set);
  CsvWriter csv(*out.stream);
  csv.header({"lambdaStar", "sureStar", "saturated", "flatTail"});
  csv.row({fmt_double(m.lambdaStar), fmt_double(m.sureStar), m.saturated ? "1" : "0",
           m.flatTail ? "1" : "0"});
  return 0;
}

struct SimulatedStudy {
  DgpSpec dgp;
  LossModel model;
  PenaltySpec penalty;
  std::vector<double> grid;
  CvMode mode;
  std::uint64_t masterSeed = 0;
  int threads = 1;
};

SimulatedStudy parse_simulated_study(StudyConfig& cfg, int* nOut) {
  const int k = int(cfg.requireInt("k", 1, 64));
  const LossModel model = parse_model(cfg, k);
  DgpSpec dgp;
  dgp.k = k;
  dgp.model = model;
  dgp.theta0 = cfg.requireVector("theta0", k);
  dgp.sigmaNoise = cfg.getReal("sigmaNoise", 1.0, 1e-12, 1e12);
  SimulatedStudy s{dgp,
                   model,
                   parse_penalty(cfg, k),
                   require_lambda_grid(cfg),
                   parse_mode(cfg),
                   cfg.getU64("masterSeed", 12345),
                   int(cfg.getInt("threads", 1, 0, 4096))};
  if (nOut != nullptr) {
    *nOut = int(cfg.requireInt("n", 1, 100000000));
    if (*nOut <= k)
      throw ConfigError("key 'n': the sample size must exceed k = " + std::to_string(k));
  }
  return s;
}

int cmd_cv_curve(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  int n = 0;
  SimulatedStudy s = parse_simulated_study(cfg, &n);
  const long rep = cfg.getInt("rep", 0, 0, 1000000000);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("cv-curve has no reference table for --check");

  const Dataset ds =
      simulate_dataset(s.dgp, n, derive_seed(s.masterSeed, std::uint64_t(n), std::uint64_t(rep)));
  const CvCurve curve = cv_curve(s.model, ds, s.penalty, s.grid, s.mode);
  CsvWriter csv(*out.stream);
  csv.header({"lambda", "cv"});
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
    csv.row({fmt_double(curve.lambdas[i]), fmt_double(curve.values[i])});
  return 0;
}

int cmd_tune(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  int n = 0;
  SimulatedStudy s = parse_simulated_study(cfg, &n);
  const long rep = cfg.getInt("rep", 0, 0, 1000000000);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("tune has no reference table for --check");

  const Dataset ds =
      simulate_dataset(s.dgp, n, derive_seed(s.masterSeed, std::uint64_t(n), std::uint64_t(rep)));
  const TuneResult t = tune_cv(s.model, ds, s.penalty, s.grid, s.mode);
  CsvWriter csv(*out.stream);
  std::vector<std::string> cols{"lambdaStar"};
  for (int j = 0; j < s.dgp.k; ++j) cols.push_back("thetaStar_" + std::to_string(j));
  csv.header(cols);
  std::vector<std::string> row{fmt_double(t.lambdaStarN)};
  for (int j = 0; j < s.dgp.k; ++j) row.push_back(fmt_double(t.thetaStarN[j]));
  csv.row(row);
  return 0;
}

int cmd_convergence_study(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  SimulatedStudy s = parse_simulated_study(cfg, nullptr);
  const std::vector<long> nList = cfg.getIntList("nList", {});
  if (nList.empty()) throw ConfigError("missing required key 'nList'");
  const long replications = cfg.requireInt("replications", 1, 100000000);
  const std::string sigmaForSure = cfg.getString("sigmaForSure", "estimated");
  if (sigmaForSure != "estimated" && sigmaForSure != "true")
    throw ConfigError("key 'sigmaForSure': expected 'estimated' or 'true'");
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("convergence-study has no reference table for --check");
  for (long n : nList)
    if (n <= s.dgp.k)
      throw ConfigError("key 'nList': every sample size must exceed k = " + std::to_string(s.dgp.k));

  const Mat sigmaTrue =
      Mat::Identity(s.dgp.k, s.dgp.k) * (s.dgp.sigmaNoise * s.dgp.sigmaNoise);
  const bool useTrue = sigmaForSure == "true";
  if (useTrue && s.model.kind != LossKind::LinearSquaredError)
    throw ConfigError("sigmaForSure = true is only available for the linear model");

  CsvWriter csv(*out.stream);
  csv.header({"n", "replication", "rawGap", "centeredGap", "argminCv", "argminSure",
              "lambdaStarAgrees"});
  for (long n : nList) {
    std::vector<GapReport> reports(std::size_t(replications));
    std::vector<int> failed(std::size_t(replications), 0);
    // Replications are independent (per-rep derived seeds); any schedule
    // produces the same table.
    for (long r = 0; r < replications; ++r) {
      const Dataset ds = simulate_dataset(
          s.dgp, int(n), derive_seed(s.masterSeed, std::uint64_t(n), std::uint64_t(r)));
      reports[std::size_t(r)] = cv_sure_gap(s.model, ds, s.penalty, s.grid, s.mode, s.dgp.theta0,
                                            useTrue ? &sigmaTrue : nullptr);
    }
    for (long r = 0; r < replications; ++r) {
      const GapReport& g = reports[std::size_t(r)];
      const double raw = useTrue ? g.rawGapTrue : g.rawGap;
      const double centered = useTrue ? g.centeredGapTrue : g.centeredGap;
      const double argminSure = useTrue ? g.argminSureTrue : g.argminSure;
      csv.row({std::to_string(n), std::to_string(r), fmt_double(raw), fmt_double(centered),
               fmt_double(g.argminCv), fmt_double(argminSure),
               g.argminCv == argminSure ? "1" : "0"});
    }
  }
  return 0;
}

int cmd_risk_curve(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.requireInt("k", 1, 64));
  const LossModel model = parse_model(cfg, k);
  const PenaltySpec penalty = parse_penalty(cfg, k);
  std::vector<double> grid = parse_grid(cfg, "lambda", false);
  const CvMode mode = parse_mode(cfg);
  const std::vector<double> normThetas = cfg.requireRealList("normThetas");
  Vec dir;
  if (cfg.has("direction")) {
    dir = cfg.requireVector("direction", k);
    if (dir.norm() == 0.0) throw ConfigError("key 'direction': zero vector");
    dir /= dir.norm();
  } else {
    cfg.getString("direction", "");
    dir = Vec::Zero(k);
    dir[0] = 1.0;
  }
  std::vector<std::string> estimators;
  {
    std::stringstream ss(cfg.getString("estimators", "cv,limit"));
    std::string tok;
    while (std::getline(ss, tok, ',')) estimators.push_back(trim_copy(tok));
  }
  McConfig mc;
  mc.replications = int(cfg.getInt("replications", 1000, 1, 1000000000));
  mc.masterSeed = cfg.getU64("masterSeed", 12345);
  mc.truncationM = cfg.getReal("truncationM", 50.0, 1e-12, 1e18);
  mc.threads = int(cfg.getInt("threads", 1, 0, 4096));
  const long jsReps = cfg.getInt("jsReps", 1000000, 1, 4000000000L);
  const int n = int(cfg.getInt("n", 400, 2, 100000000));
  DgpSpec dgp;
  dgp.k = k;
  dgp.model = model;
  dgp.sigmaNoise = cfg.getReal("sigmaNoise", 1.0, 1e-12, 1e12);
  const Mat sigma = cfg.getMatrix("sigma", k, "identity");
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();
  if (opts.check) throw ConfigError("risk-curve has no reference table for --check");

  bool needsGrid = false;
  for (const auto& est : estimators)
    if (est == "cv" || est == "limit") needsGrid = true;
  if (needsGrid && grid.empty())
    throw ConfigError("estimators cv/limit need a lambda grid");
  if (needsGrid && n <= k) throw ConfigError("key 'n': the sample size must exceed k");

  CsvWriter csv(*out.stream);
  csv.header({"normTheta", "estimator", "n", "risk", "stderr"});
  for (std::size_t pi = 0; pi < normThetas.size(); ++pi) {
    const double x = normThetas[pi];
    if (!(x >= 0.0)) throw ConfigError("key 'normThetas': entries must be nonnegative");
    dgp.theta0 = x * dir;
    for (const auto& est : estimators) {
      if (est == "cv") {
        const RiskEstimate r = risk_cv(dgp, n, penalty, grid, mode, mc);
        csv.row({fmt_double(x), "cv", std::to_string(n), fmt_double(r.mean),
                 fmt_double(r.stderrOfMean)});
      } else if (est == "limit") {
        const RiskEstimate r =
            risk_sure_limit(dgp.theta0, sigma, penalty, LambdaSet::finiteGrid(grid), mc);
        csv.row({fmt_double(x), "limit", "limit", fmt_double(r.mean),
                 fmt_double(r.stderrOfMean)});
      } else if (est == "js-plain" || est == "js-positive-part") {
        const JsVariant v = est == "js-plain" ? JsVariant::Plain : JsVariant::PositivePart;
        // js_risk's normTheta axis is in total-noise units; the literal
        // ||theta0|| = x maps to x / sqrt(k).
        const double r = js_risk(x / std::sqrt(double(k)), k, v, jsReps,
                                 derive_seed(mc.masterSeed, 0xF1, pi), mc.threads);
        csv.row({fmt_double(x), est, "limit", fmt_double(r), "0"});
      } else {
        throw ConfigError("key 'estimators': unknown estimator '" + est + "'");
      }
    }
  }
  return 0;
}

int cmd_sawtooth(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.requireInt("k", 1, 64));
  const PenaltySpec penalty = parse_penalty(cfg, k);
  if (penalty.kind() != PenaltyKind::Lasso)
    throw ConfigError("sawtooth requires a lasso penalty");
  Vec nu = cfg.requireVector("nu", k);
  if (nu.norm() == 0.0) throw ConfigError("key 'nu': zero vector");
  nu /= nu.norm();
  const Mat sigma = cfg.getMatrix("sigma", k, "identity");
  std::vector<double> Rgrid = parse_grid(cfg, "R", true);
  cfg.getU64("masterSeed", 12345);
  cfg.getInt("threads", 1, 0, 4096);
  const double tolerance = cfg.getReal("checkTolerance", 1e-9, 0.0, 1.0);
  const std::string refPath = reference_path(cfg, "sawtooth_orthogonal.csv", opts.check);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();

  const auto profile = sawtooth_profile(penalty, nu, Rgrid, sigma);
  CsvWriter csv(*out.stream);
  csv.header({"R", "lambdaStar", "segmentIndex", "lambdaStarOverR"});
  std::vector<std::vector<double>> rows;
  for (const auto& pt : profile) {
    const double ratio = pt.lambdaStar / pt.R;
    csv.row({fmt_double(pt.R), fmt_double(pt.lambdaStar), std::to_string(pt.segmentIndex),
             fmt_double(ratio)});
    rows.push_back({pt.R, pt.lambdaStar, double(pt.segmentIndex), ratio});
  }
  if (opts.check) check_against_reference(refPath, rows, tolerance);
  return 0;
}

int cmd_js_figure(const CommonOpts& opts) {
  StudyConfig cfg = load_config(opts);
  const int k = int(cfg.getInt("k", 10, 3, 64));
  const long reps = cfg.getInt("reps", 1000000, 1, 4000000000L);
  const std::string variantName = cfg.getString("variant", "plain");
  JsVariant variant;
  if (variantName == "plain")
    variant = JsVariant::Plain;
  else if (variantName == "positive-part")
    variant = JsVariant::PositivePart;
  else
    throw ConfigError("key 'variant': expected 'plain' or 'positive-part'");
  const double maxNorm = cfg.getReal("normThetaMax", 6.0, 0.0, 1e6);
  const double step = cfg.getReal("normThetaStep", 0.1, 1e-9, 1e6);
  const std::uint64_t seed = cfg.getU64("masterSeed", 12345);
  const int threads = int(cfg.getInt("threads", 1, 0, 4096));
  const double tolerance = cfg.getReal("checkTolerance", 0.01, 0.0, 1.0);
  const std::string refPath = reference_path(cfg, "js_figure.csv", opts.check);
  Output out = open_output(opts, cfg);
  cfg.requireAllConsumed();

  CsvWriter csv(*out.stream);
  csv.header({"normTheta", "risk"});
  std::vector<std::vector<double>> rows;
  for (long i = 0;; ++i) {
    const double x = i * step;
    if (x > maxNorm + 1e-12) break;
    const double r = js_risk(x, k, variant, reps, derive_seed(seed, 0xF1, std::uint64_t(i)),
                             threads);
    csv.row({fmt_double(x), fmt_double(r)});
    rows.push_back({x, r});
  }
  if (opts.check) check_against_reference(refPath, rows, tolerance);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SURE / cross-validation tuning laboratory"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const CommonOpts&);
    CommonOpts opts;
  };
  std::vector<Entry> entries{
      {"prox-eval", "evaluate the proximal map over a lambda grid", cmd_prox_eval, {}},
      {"sure-landscape", "SURE curve over a lambda grid (plus minima diagnostics)",
       cmd_sure_landscape, {}},
      {"sure-min", "minimize SURE over the tuning set", cmd_sure_min, {}},
      {"cv-curve", "n-fold CV criterion over a lambda grid on a simulated dataset",
       cmd_cv_curve, {}},
      {"tune", "CV-tuned penalized fit on a simulated dataset", cmd_tune, {}},
      {"convergence-study", "CV-vs-SURE gap and argmin agreement across sample sizes",
       cmd_convergence_study, {}},
      {"risk-curve", "Monte Carlo risk of tuned estimators over a signal-strength grid",
       cmd_risk_curve, {}},
      {"sawtooth", "lasso tuning profile lambda*(R) along a direction", cmd_sawtooth, {}},
      {"js-figure", "James-Stein normalized risk curve, dimension k", cmd_js_figure, {}},
  };
  for (auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, e.opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // parse problems are configuration errors
  }

  try {
    for (auto& e : entries)
      if (app.get_subcommand(e.name)->parsed()) return e.fn(e.opts);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
