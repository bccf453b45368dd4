#pragma once

#include <cstdint>
#include <vector>

#include "surecvlab/cv.hpp"
#include "surecvlab/rng.hpp"

namespace surecv {

/// Local-to-zero DGP: the local parameter theta0 is fixed across n and the
/// finite-sample coefficient is beta0 = theta0 / sqrt(n). Linear datasets
/// draw standard-normal features (E[WW'] = I); logistic datasets draw
/// N(0, 4I) features so the limiting Hessian is the identity.
struct DgpSpec {
  Vec theta0;
  double sigmaNoise = 1.0;  // linear-model noise sd
  LossModel model;
  int k = 0;
};

struct McConfig {
  std::vector<int> sampleSizes;
  int replications = 1;
  std::uint64_t masterSeed = 0;
  double truncationM = 50.0;
  int threads = 1;  // 0 = all cores; never affects output values
};

struct RiskEstimate {
  double mean = 0.0;
  double stderrOfMean = 0.0;
  int replications = 0;
  double truncationM = 0.0;
  int failures = 0;
};

/// Deterministic given the seed; use derive_seed(masterSeed, n, rep).
/// Draw order per observation i: the k feature entries of row i, then the
/// outcome draw for row i.
Dataset simulate_dataset(const DgpSpec& dgp, int n, std::uint64_t seed);

/// Expected out-of-sample regret scaled by n: L_bar_n(theta, theta0).
/// Linear: exactly 0.5 ||theta - theta0||^2. Logistic: Gauss-Hermite
/// quadrature over the feature distribution, refined until successive node
/// doublings differ by < 1e-8.
double oos_regret(const LossModel& model, const DgpSpec& dgp, int n, const Vec& theta);

/// Monte Carlo truncated risk of the CV-tuned finite-sample estimator:
/// E[min(L_bar_n(theta*_n, theta0), M)]. Replication failures are excluded
/// and counted; more than 1% failures aborts the study.
RiskEstimate risk_cv(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                     const std::vector<double>& lambdaGrid, CvMode mode, const McConfig& mc);

/// Monte Carlo truncated risk of the SURE-tuned estimator in the normal-means
/// limit: draw theta_hat ~ N(theta0, Sigma), tune by SURE, record
/// min(0.5 ||theta_hat* - theta0||^2, M).
RiskEstimate risk_sure_limit(const Vec& theta0, const Mat& sigma, const PenaltySpec& penalty,
                             const LambdaSet& lambdaSet, const McConfig& mc);

/// Untruncated per-replication loss samples (for distributional comparison).
std::vector<double> tuned_loss_samples(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                                       const std::vector<double>& lambdaGrid, CvMode mode,
                                       const McConfig& mc);
std::vector<double> limit_loss_samples(const Vec& theta0, const Mat& sigma,
                                       const PenaltySpec& penalty, const LambdaSet& lambdaSet,
                                       const McConfig& mc);

/// Two-sample KS distance between the finite-n tuned-loss sample and the
/// SURE-tuned limit-loss sample (Sigma taken from the DGP).
double loss_distribution_compare(const DgpSpec& dgp, int n, const PenaltySpec& penalty,
                                 const std::vector<double>& lambdaGrid, CvMode mode,
                                 const McConfig& mc);

enum class JsVariant { Plain, PositivePart };

/// Normalized James-Stein risk (MSE / k) at signal strength `normTheta`, the
/// x-axis of the usual dimension-k risk plot: theta_hat ~ N(theta, I) with
/// ||theta|| = sqrt(k) * normTheta, so the MLE reference risk is 1. Requires
/// k >= 3.
double js_risk(double normTheta, int k, JsVariant variant, long reps, std::uint64_t seed,
               int threads = 1);

/// Exact plain-JS risk by the Poisson mixture series
/// (k - (k-2)^2 E[1/(k-2+2K)]) / k with K ~ Poisson(k normTheta^2 / 2),
/// truncated when the tail term drops below 1e-12.
double js_risk_series(double normTheta, int k);

}  // namespace surecv
