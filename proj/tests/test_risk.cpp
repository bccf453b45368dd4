#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "surecvlab/risk.hpp"
#include "surecvlab/stats.hpp"

using namespace surecv;

namespace {

const LossModel kLinear{LossKind::LinearSquaredError, 0};
const LossModel kLogistic{LossKind::LogisticNll, 0};

DgpSpec linear_dgp(const Vec& theta0, double sigma = 1.0) {
  DgpSpec d;
  d.theta0 = theta0;
  d.sigmaNoise = sigma;
  d.model = kLinear;
  d.k = int(theta0.size());
  return d;
}

DgpSpec logistic_dgp(const Vec& theta0) {
  DgpSpec d;
  d.theta0 = theta0;
  d.model = kLogistic;
  d.k = int(theta0.size());
  return d;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo * std::pow(hi / lo, i / double(count - 1));
  return g;
}

McConfig mc(int reps, std::uint64_t seed, double M = 50.0) {
  McConfig c;
  c.replications = reps;
  c.masterSeed = seed;
  c.truncationM = M;
  return c;
}

}  // namespace

TEST_CASE("simulate_dataset: pure noise has vanishing feature-outcome correlation") {
  const DgpSpec dgp = linear_dgp(Vec::Zero(3));
  const Dataset ds = simulate_dataset(dgp, 400, derive_seed(1, 400, 0));
  for (int j = 0; j < 3; ++j) {
    const double corr =
        (ds.W.col(j).array() - ds.W.col(j).mean()).matrix().dot(ds.Y - Vec::Constant(400, ds.Y.mean())) /
        (400.0 * 1.0);
    CHECK(std::abs(corr) < 0.2);
  }
}

TEST_CASE("simulate_dataset: bit-identical under the same derived seed") {
  const DgpSpec dgp = linear_dgp((Vec(2) << 1.0, -1.0).finished());
  const Dataset a = simulate_dataset(dgp, 100, derive_seed(42, 100, 7));
  const Dataset b = simulate_dataset(dgp, 100, derive_seed(42, 100, 7));
  CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.Y - b.Y).cwiseAbs().maxCoeff() == 0.0);
  const Dataset c = simulate_dataset(dgp, 100, derive_seed(42, 100, 8));
  CHECK((a.W - c.W).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("simulate_dataset: estimator recovery matches the calibrated band") {
  const DgpSpec dgp = linear_dgp((Vec(3) << 2.0, 0.0, 0.0).finished());
  std::vector<double> dist;
  for (int rep = 0; rep < 200; ++rep) {
    const Dataset ds = simulate_dataset(dgp, 400, derive_seed(3, 400, rep));
    dist.push_back((fit_erm(kLinear, ds) - dgp.theta0).norm());
  }
  const double med = median_of(dist);
  CHECK(med > 1.3);  // sqrt of the chi^2_3 median is 1.54; finite-n inflation pushes it up
  CHECK(med < 1.9);
}

TEST_CASE("oos_regret: linear closed form") {
  const DgpSpec dgp = linear_dgp((Vec(2) << 1.0, 1.0).finished());
  CHECK(oos_regret(kLinear, dgp, 100, dgp.theta0) == 0.0);
  Vec theta = dgp.theta0;
  theta[0] += 1.0;
  CHECK(oos_regret(kLinear, dgp, 100, theta) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("oos_regret: logistic quadrature against a Monte Carlo oracle") {
  const DgpSpec dgp = logistic_dgp((Vec(2) << 1.0, -0.5).finished());
  const int n = 400;
  Vec theta = dgp.theta0;
  theta[0] += 0.6;
  theta[1] -= 0.4;
  const double quad = oos_regret(kLogistic, dgp, n, theta);

  // Direct Monte Carlo of n * E[l_n(theta) - l_n(theta0)] over W ~ N(0, 4I).
  Rng rng(2718);
  const double rootN = std::sqrt(double(n));
  const Vec b1 = theta / rootN, b0 = dgp.theta0 / rootN;
  const long reps = 10000000;
  double sum = 0.0, sumSq = 0.0;
  for (long r = 0; r < reps; ++r) {
    const double w0 = 2.0 * rng.normal(), w1 = 2.0 * rng.normal();
    const double u = w0 * b1[0] + w1 * b1[1];
    const double u0 = w0 * b0[0] + w1 * b0[1];
    const double v = double(n) * (log1pexp(u) - log1pexp(u0) - sigmoid(u0) * (u - u0));
    sum += v;
    sumSq += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumSq / reps - mean * mean) / reps);
  CHECK(std::abs(quad - mean) <= 3.0 * se);

  // Small parameter distances behave like 0.5||theta - theta0||^2 with a
  // curvature correction bounded by the logistic Hessian range.
  CHECK(quad > 0.0);
  CHECK(quad < 0.5 * (theta - dgp.theta0).squaredNorm() * 1.1);
}

TEST_CASE("risk_cv: tuned ridge beats the unpenalized estimator at the origin") {
  const DgpSpec dgp = linear_dgp(Vec::Zero(10));
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(10, 10));
  std::vector<double> grid = log_grid(0.05, 200.0, 12);
  const McConfig cfg = mc(2000, 101, 1e6);
  const RiskEstimate tuned = risk_cv(dgp, 400, ridge, grid, CvMode::ApproxLoo, cfg);
  const RiskEstimate unpen = risk_cv(dgp, 400, ridge, {0.0}, CvMode::ApproxLoo, cfg);
  const double se = std::hypot(tuned.stderrOfMean, unpen.stderrOfMean);
  CHECK(tuned.mean < unpen.mean - 3.0 * se);
}

TEST_CASE("risk_cv: tiny truncation level dominates") {
  const DgpSpec dgp = linear_dgp((Vec(2) << 2.0, 2.0).finished());
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(2, 2));
  const RiskEstimate est = risk_cv(dgp, 50, ridge, {0.0}, CvMode::ExactLoo, mc(50, 5, 1e-6));
  CHECK(est.mean == doctest::Approx(1e-6).epsilon(1e-9));
}

TEST_CASE("risk_cv: single replication reports zero stderr") {
  const DgpSpec dgp = linear_dgp((Vec(2) << 1.0, 0.0).finished());
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(2, 2));
  const RiskEstimate est = risk_cv(dgp, 50, ridge, {0.1, 1.0}, CvMode::ExactLoo, mc(1, 6));
  CHECK(est.replications == 1);
  CHECK(est.stderrOfMean == 0.0);
}

TEST_CASE("risk_sure_limit: untuned grid {0} gives k/2") {
  const int k = 6;
  const McConfig cfg = mc(40000, 11, 1e6);
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(k, k));
  const RiskEstimate est = risk_sure_limit(Vec::Zero(k), Mat::Identity(k, k), ridge,
                                           LambdaSet::finiteGrid({0.0}), cfg);
  CHECK(std::abs(est.mean - k / 2.0) <= 4.0 * est.stderrOfMean);
}

TEST_CASE("risk_sure_limit: SURE-tuned ridge at the origin, oracle band") {
  // Pre-computed oracle: shrink fraction c* = clamp(k/S, ...) gives
  // normalized risk 0.0663 at k = 10.
  const int k = 10;
  const McConfig cfg = mc(20000, 13, 100.0);
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(k, k));
  const RiskEstimate est =
      risk_sure_limit(Vec::Zero(k), Mat::Identity(k, k), ridge, LambdaSet::allNonneg(), cfg);
  const double normalized = 2.0 * est.mean / k;
  CHECK(normalized > 0.05);
  CHECK(normalized < 0.09);
}

TEST_CASE("risk_sure_limit: degenerate sigma is deterministic") {
  const int k = 3;
  Vec theta0(k);
  theta0 << 1.0, -2.0, 0.5;
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(k, k));
  const McConfig cfg = mc(50, 17, 1e6);
  const RiskEstimate est =
      risk_sure_limit(theta0, Mat::Zero(k, k), ridge, LambdaSet::finiteGrid({0.7}), cfg);
  const double expect = 0.5 * prox(ridge, 0.7, theta0).g.squaredNorm();
  CHECK(est.mean == doctest::Approx(expect).epsilon(1e-12));
  CHECK(est.stderrOfMean == doctest::Approx(0.0));
}

TEST_CASE("js_risk: series value at the origin and k >= 3 guard") {
  CHECK(js_risk_series(0.0, 10) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(js_risk(1.0, 2, JsVariant::Plain, 10, 1), ConfigError);
}

TEST_CASE("js_risk: plain Monte Carlo matches the Poisson-mixture series") {
  for (double normTheta : {0.0, 1.0, 2.0, 4.0, 6.0}) {
    std::vector<double> runs;
    for (int s = 0; s < 5; ++s)
      runs.push_back(js_risk(normTheta, 10, JsVariant::Plain, 200000, 900 + s));
    const double m = mean_of(runs);
    const double se = stderr_of_mean(runs);
    CHECK(std::abs(m - js_risk_series(normTheta, 10)) <= 3.0 * std::max(se, 1e-4));
  }
}

TEST_CASE("js_risk: positive part improves on plain and matches its oracle at zero") {
  // Closed form via chi-square tails: E[(S-8)^2/S ; S > 8] / 10 = 0.125767.
  const double pp = js_risk(0.0, 10, JsVariant::PositivePart, 1000000, 77);
  CHECK(std::abs(pp - 0.125767) <= 0.004);
  const double plain = js_risk(0.0, 10, JsVariant::Plain, 1000000, 77);
  CHECK(pp < plain);
}

TEST_CASE("js_risk: risk curve is non-decreasing in the signal norm") {
  double prev = -1.0, prevSe = 0.0;
  for (double x = 0.0; x <= 6.0 + 1e-9; x += 0.25) {
    std::vector<double> runs;
    for (int s = 0; s < 4; ++s) runs.push_back(js_risk(x, 10, JsVariant::Plain, 50000, 1700 + s));
    const double m = mean_of(runs);
    const double se = stderr_of_mean(runs);
    if (prev >= 0.0) CHECK(m >= prev - 2.0 * (se + prevSe));
    prev = m;
    prevSe = se;
  }
}

TEST_CASE("ks statistic: identical samples give zero") {
  std::vector<double> a{0.3, 1.2, 2.2, 0.3, 5.0};
  CHECK(ks_statistic(a, a) == 0.0);
}

TEST_CASE("loss distributions converge: lasso KS shrinks from n = 200 to n = 800") {
  const DgpSpec dgp = linear_dgp((Vec(3) << 2.5, 1.0, 0.0).finished());
  const PenaltySpec lasso = PenaltySpec::lasso(Mat::Identity(3, 3));
  const std::vector<double> grid = log_grid(0.05, 4.0, 10);
  const McConfig cfg = mc(2000, 19);
  const double ks200 = loss_distribution_compare(dgp, 200, lasso, grid, CvMode::ApproxLoo, cfg);
  const double ks800 = loss_distribution_compare(dgp, 800, lasso, grid, CvMode::ApproxLoo, cfg);
  CHECK(ks800 < ks200);
}

TEST_CASE("truncated risk converges to the limit across n") {
  const DgpSpec dgp = linear_dgp((Vec(3) << 2.0, 1.0, 0.0).finished());
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(3, 3));
  const std::vector<double> grid = log_grid(0.05, 20.0, 15);
  std::vector<double> medianGap;
  for (int n : {200, 800, 3200}) {
    std::vector<double> gaps;
    for (int study = 0; study < 5; ++study) {
      McConfig cfg = mc(1500, 2000 + study);
      const RiskEstimate fin = risk_cv(dgp, n, ridge, grid, CvMode::ApproxLoo, cfg);
      McConfig cfgLim = mc(20000, 9000 + study);
      const RiskEstimate lim = risk_sure_limit(dgp.theta0, Mat::Identity(3, 3), ridge,
                                               LambdaSet::finiteGrid(grid), cfgLim);
      gaps.push_back(std::abs(fin.mean - lim.mean));
    }
    medianGap.push_back(median_of(gaps));
  }
  CHECK(medianGap[1] < medianGap[0]);
  CHECK(medianGap[2] < medianGap[1]);
}

TEST_CASE("studies are bit-reproducible and thread-count independent") {
  const DgpSpec dgp = linear_dgp((Vec(2) << 1.0, 0.5).finished());
  const PenaltySpec ridge = PenaltySpec::ridge(Mat::Identity(2, 2));
  const std::vector<double> grid = log_grid(0.1, 5.0, 6);
  McConfig a = mc(64, 21);
  McConfig b = mc(64, 21);
  b.threads = 3;
  const RiskEstimate ra = risk_cv(dgp, 100, ridge, grid, CvMode::ApproxLoo, a);
  const RiskEstimate rb = risk_cv(dgp, 100, ridge, grid, CvMode::ApproxLoo, b);
  CHECK(ra.mean == rb.mean);
  CHECK(ra.stderrOfMean == rb.stderrOfMean);
  CHECK(js_risk(1.5, 10, JsVariant::Plain, 100000, 5, 1) ==
        js_risk(1.5, 10, JsVariant::Plain, 100000, 5, 3));
}
