#pragma once

#include <vector>

#include "surecvlab/loss.hpp"
#include "surecvlab/penalty.hpp"

namespace surecv {

/// ERM estimator theta_hat = argmin L_n(theta), in local scale theta = sqrt(n) beta.
/// Linear models are solved exactly by least squares; otherwise Newton with
/// backtracking to gradient norm <= 1e-10. min Hessian eigenvalue <= 1e-8 is a
/// rank-deficiency failure naming the eigenvalue.
Vec fit_erm(const LossModel& model, const Dataset& data);

/// Penalized ERM argmin [L_n(theta) + lambda pi(theta)]. Ridge: Newton on the
/// smooth composite; Lasso: proximal gradient with backtracking, terminating
/// at composite-optimality residual <= 1e-9. `warmStart` optional.
Vec fit_penalized(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                  double lambda, const Vec* warmStart = nullptr);

/// Fits along a lambda grid, warm-started largest-to-smallest. Returns fits in
/// the grid's order.
std::vector<Vec> fit_penalized_path(const LossModel& model, const Dataset& data,
                                    const PenaltySpec& penalty,
                                    const std::vector<double>& lambdas);

/// Exact leave-one-out estimates: n refits warm-started at the full-sample fit.
/// Row i is theta_hat^{lambda, -i}.
Mat loo_exact(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
              double lambda);

/// Approximate leave-one-out: one Newton step on the leave-one-out objective
/// from thetaHatLambda. Lasso steps are restricted to the active set of
/// h = A^{-1} theta_hat (inactive coordinates held at 0); Ridge uses the full
/// penalized Hessian. Folds with a singular restricted Hessian fall back to
/// an exact refit and are reported in `flaggedFolds` when non-null.
Mat loo_approx(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
               double lambda, const Vec& thetaHatLambda,
               std::vector<int>* flaggedFolds = nullptr);

/// Influence-function quantities at a known theta0:
///   scores row i: X_i = -grad_beta l(theta0 / sqrt(n), Z_i)
///   thetaTilde = theta0 + (1/sqrt(n)) sum_i X_i
///   sigmaHat = (1/n) sum_i X_i X_i'
struct InfluenceBundle {
  Vec thetaTilde;
  Mat scores;
  Mat sigmaHat;
};
InfluenceBundle influence_estimate(const LossModel& model, const Dataset& data, const Vec& theta0);

/// beta-scale accessor for a local-scale estimate.
inline Vec to_beta_scale(const Vec& theta, int n) { return theta / std::sqrt(double(n)); }

}  // namespace surecv
