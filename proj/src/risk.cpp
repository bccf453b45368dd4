#include "surecvlab/risk.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "surecvlab/stats.hpp"

namespace surecv {
namespace {

int resolve_threads(int threads) {
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (threads == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }
  return threads;
}

/// Runs fn(i) for i in [0, count). The work item i owns everything it
/// writes, so results are identical for any thread count.
template <typename F>
void parallel_for_index(long count, int threads, F&& fn) {
  const int T = std::min<long>(resolve_threads(threads), count);
  if (T <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(T));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (;;) {
          const long i = next.fetch_add(1);
          if (i >= count) break;
          fn(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void validate_dgp(const DgpSpec& dgp) {
  if (dgp.k <= 0 || dgp.theta0.size() != dgp.k) throw ConfigError("dgp: theta0 must have length k");
  require_finite(dgp.theta0, "theta0");
  if (!(dgp.sigmaNoise > 0.0)) throw ConfigError("dgp: sigmaNoise must be positive");
}

Mat sigma_sqrt(const Mat& sigma) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  Vec d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
  return es.eigenvectors() * d.asDiagonal();
}

/// Probabilists' Gauss-Hermite rule (expectation under the standard normal).
void gh_nodes(int m, std::vector<double>& x, std::vector<double>& w) {
  Mat J = Mat::Zero(m, m);
  for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    w[i] = v0 * v0;
  }
}

double logistic_regret(const Vec& theta, const Vec& theta0, int n) {
  // u = W.beta and u0 = W.beta0 are jointly normal with covariance
  // (4/n) [theta'theta, theta'theta0; ., theta0'theta0] (features ~ N(0,4I)).
  const double f = 4.0 / static_cast<double>(n);
  Mat C(2, 2);
  C << f * theta.dot(theta), f * theta.dot(theta0), f * theta.dot(theta0),
      f * theta0.dot(theta0);
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  const Vec d = es.eigenvalues();
  const Mat V = es.eigenvectors();
  std::vector<int> dims;
  for (int i = 0; i < 2; ++i)
    if (d[i] > 1e-30 * std::max(1.0, d.maxCoeff())) dims.push_back(i);
  if (dims.empty()) return 0.0;

  const auto integrand = [](double u, double u0) {
    return log1pexp(u) - log1pexp(u0) - sigmoid(u0) * (u - u0);
  };

  double prev = 0.0;
  bool havePrev = false;
  for (int m : {20, 40, 80, 160, 320}) {
    std::vector<double> x, w;
    gh_nodes(m, x, w);
    double total = 0.0;
    if (dims.size() == 1) {
      const double au = V(0, dims[0]) * std::sqrt(d[dims[0]]);
      const double a0 = V(1, dims[0]) * std::sqrt(d[dims[0]]);
      for (int i = 0; i < m; ++i) total += w[i] * integrand(au * x[i], a0 * x[i]);
    } else {
      const double au1 = V(0, dims[0]) * std::sqrt(d[dims[0]]);
      const double a01 = V(1, dims[0]) * std::sqrt(d[dims[0]]);
      const double au2 = V(0, dims[1]) * std::sqrt(d[dims[1]]);
      const double a02 = V(1, dims[1]) * std::sqrt(d[dims[1]]);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          total += w[i] * w[j] * integrand(au1 * x[i] + au2 * x[j], a01 * x[i] + a02 * x[j]);
    }
    const double val = static_cast<double>(n) * total;
    if (havePrev && std::abs(val - prev) < 1e-8) return val;
    prev = val;
    havePrev = true;
  }
  throw NumericError("oos_regret: quadrature refinement did not converge below 1e-8");
}

}  // namespace

Dataset simulate_dataset(const DgpSpec& dgp, int n, std::uint64_t seed) {
  validate_dgp(dgp);
  if (n <= dgp.k) throw ConfigError("simulate_dataset: requires n > k");
  const double rootN = std::sqrt(static_cast<double>(n));
  const Vec beta0 = dgp.theta0 / rootN;
  const double wScale = dgp.model.kind == LossKind::LogisticNll ? 2.0 : 1.0;
  Rng rng(seed);
  Dataset ds;
  ds.W.resize(n, dgp.k);
  ds.Y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dgp.k; ++j) ds.W(i, j) = wScale * rng.normal();
    const double mu = ds.W.row(i) * beta0;
    if (dgp.model.kind == LossKind::LinearSquaredError)
      ds.Y[i] = mu + dgp.sigmaNoise * rng.normal();
    else
      ds.Y[i] = rng.uniform() < sigmoid(mu) ? 1.0 : 0.0;
  }
  return ds;
}

double oos_regret(const LossModel& model, const DgpSpec& dgp, int n, const Vec& theta) {
  validate_dgp(dgp);
  if (theta.size() != dgp.k) throw ConfigError("oos_regret: theta dimension mismatch");
  require_finite(theta, "theta");
  if (model.kind == LossKind::LinearSquaredError) return 0.5 * (theta - dgp.theta0).squaredNorm();
  return logistic_regret(theta, dgp.theta0, n);
}

namespace {

struct RepOutcome {
  double loss = 0.0;
  bool failed = false;
};

RiskEstimate aggregate(const std::vector<RepOutcome>& reps, double M) {
  std::vector<double> vals;
  int failures = 0;
  for (const auto& r : reps) {
    if (r.failed)
      ++failures;
    else
      vals.push_back(std::min(r.loss, M));
  }
  if (failures > 0 &&
      static_cast<double>(failures) > 0.01 * static_cast<double>(reps.size())) {
    std::ostringstream msg;
    msg << "risk study aborted: " << failures << " of " << reps.size()
        << " replications failed (> 1%)";
    throw NumericError(msg.str());
  }
  if (vals.empty()) throw NumericError("risk study: no successful replications");
  RiskEstimate est;
  est.mean = mean_of(vals);
  est.stderrOfMean = stderr_of_mean(vals);
  est.replications = static_cast<int>(vals.size());
  est.truncationM = M;
  est.failures = failures;
  return est;
}

std::vector<RepOutcome> cv_loss_reps(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                                     const std::vector<double>& lambdaGrid, CvMode mode,
                                     const McConfig& mc) {
  validate_dgp(dgp);
  if (mc.replications < 1) throw ConfigError("replications must be >= 1");
  std::vector<RepOutcome> reps(static_cast<std::size_t>(mc.replications));
  parallel_for_index(mc.replications, mc.threads, [&](long r) {
    const std::uint64_t seed =
        derive_seed(mc.masterSeed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
    auto& out = reps[static_cast<std::size_t>(r)];
    try {
      const Dataset ds = simulate_dataset(dgp, n, seed);
      const TuneResult tuned = tune_cv(dgp.model, ds, penalty, lambdaGrid, mode);
      out.loss = oos_regret(dgp.model, dgp, n, tuned.thetaStarN);
    } catch (const NumericError&) {
      out.failed = true;
    }
  });
  return reps;
}

std::vector<RepOutcome> limit_loss_reps(const Vec& theta0, const Mat& sigma,
                                        const PenaltySpec& penalty, const LambdaSet& lambdaSet,
                                        const McConfig& mc) {
  if (mc.replications < 1) throw ConfigError("replications must be >= 1");
  validate_sigma(sigma, static_cast<int>(theta0.size()));
  const Mat L = sigma_sqrt(sigma);
  std::vector<RepOutcome> reps(static_cast<std::size_t>(mc.replications));
  parallel_for_index(mc.replications, mc.threads, [&](long r) {
    // The limit experiment occupies the n = 0 slot of the seed rule.
    Rng rng(derive_seed(mc.masterSeed, 0, static_cast<std::uint64_t>(r)));
    auto& out = reps[static_cast<std::size_t>(r)];
    try {
      const Vec thetaHat = theta0 + L * rng.normal_vec(static_cast<int>(theta0.size()));
      const MinSureResult m = minimize_sure(penalty, thetaHat, sigma, lambdaSet);
      const Vec fitted = prox(penalty, m.lambdaStar, thetaHat).fitted;
      out.loss = 0.5 * (fitted - theta0).squaredNorm();
    } catch (const NumericError&) {
      out.failed = true;
    }
  });
  return reps;
}

}  // namespace

RiskEstimate risk_cv(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                     const std::vector<double>& lambdaGrid, CvMode mode, const McConfig& mc) {
  return aggregate(cv_loss_reps(dgp, n, penalty, lambdaGrid, mode, mc), mc.truncationM);
}

RiskEstimate risk_sure_limit(const Vec& theta0, const Mat& sigma, const PenaltySpec& penalty,
                             const LambdaSet& lambdaSet, const McConfig& mc) {
  return aggregate(limit_loss_reps(theta0, sigma, penalty, lambdaSet, mc), mc.truncationM);
}

std::vector<double> tuned_loss_samples(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                                       const std::vector<double>& lambdaGrid, CvMode mode,
                                       const McConfig& mc) {
  std::vector<double> out;
  for (const auto& r : cv_loss_reps(dgp, n, penalty, lambdaGrid, mode, mc))
    if (!r.failed) out.push_back(r.loss);
  return out;
}

std::vector<double> limit_loss_samples(const Vec& theta0, const Mat& sigma,
                                       const PenaltySpec& penalty, const LambdaSet& lambdaSet,
                                       const McConfig& mc) {
  std::vector<double> out;
  for (const auto& r : limit_loss_reps(theta0, sigma, penalty, lambdaSet, mc))
    if (!r.failed) out.push_back(r.loss);
  return out;
}

double loss_distribution_compare(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                                 const std::vector<double>& lambdaGrid, CvMode mode,
                                 const McConfig& mc) {
  const std::vector<double> finite = tuned_loss_samples(dgp, n, penalty, lambdaGrid, mode, mc);
  Mat sigma = Mat::Identity(dgp.k, dgp.k);
  if (dgp.model.kind == LossKind::LinearSquaredError)
    sigma *= dgp.sigmaNoise * dgp.sigmaNoise;
  const std::vector<double> limit =
      limit_loss_samples(dgp.theta0, sigma, penalty,
                         LambdaSet::finiteGrid(lambdaGrid), mc);
  return ks_statistic(finite, limit);
}

double js_risk(double normTheta, int k, JsVariant variant, long reps, std::uint64_t seed,
               int threads) {
  if (k < 3) throw ConfigError("js_risk: requires k >= 3");
  if (reps < 1) throw ConfigError("js_risk: reps must be >= 1");
  if (!(normTheta >= 0.0) || !std::isfinite(normTheta))
    throw ConfigError("js_risk: normTheta must be finite and nonnegative");

  const double t = std::sqrt(static_cast<double>(k)) * normTheta;  // ||theta|| in unit-noise scale
  const double shrink = static_cast<double>(k - 2);

  // Fixed chunking keeps the result independent of the thread count.
  constexpr long kChunks = 64;
  const long chunks = std::min<long>(kChunks, reps);
  std::vector<double> chunkSums(static_cast<std::size_t>(chunks), 0.0);
  const long base = reps / chunks, extra = reps % chunks;
  parallel_for_index(chunks, threads, [&](long c) {
    const long count = base + (c < extra ? 1 : 0);
    Rng rng(derive_seed(seed, 0x4a53, static_cast<std::uint64_t>(c)));
    double sum = 0.0;
    std::vector<double> x(static_cast<std::size_t>(k));
    for (long r = 0; r < count; ++r) {
      double S = 0.0;
      for (int j = 0; j < k; ++j) {
        x[static_cast<std::size_t>(j)] = rng.normal() + (j == 0 ? t : 0.0);
        S += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      }
      double f = S > 0.0 ? 1.0 - shrink / S : 0.0;
      if (variant == JsVariant::PositivePart && f < 0.0) f = 0.0;
      double loss = 0.0;
      for (int j = 0; j < k; ++j) {
        const double d = f * x[static_cast<std::size_t>(j)] - (j == 0 ? t : 0.0);
        loss += d * d;
      }
      sum += loss;
    }
    chunkSums[static_cast<std::size_t>(c)] = sum;
  });
  double total = 0.0;
  for (double s : chunkSums) total += s;
  return total / static_cast<double>(reps) / static_cast<double>(k);
}

double js_risk_series(double normTheta, int k) {
  if (k < 3) throw ConfigError("js_risk_series: requires k >= 3");
  const double lam = 0.5 * static_cast<double>(k) * normTheta * normTheta;
  double pmf = std::exp(-lam);
  double s = 0.0;
  for (long j = 0;; ++j) {
    const double term = pmf / static_cast<double>(k - 2 + 2 * j);
    s += term;
    if (term < 1e-12 && static_cast<double>(j) > lam) break;
    pmf *= lam / static_cast<double>(j + 1);
    if (j > 1000000) throw NumericError("js_risk_series: series did not truncate");
  }
  const double kk = static_cast<double>(k);
  return (kk - (kk - 2.0) * (kk - 2.0) * s) / kk;
}

}  // namespace surecv
