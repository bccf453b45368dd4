#pragma once

#include "surecvlab/penalty.hpp"

namespace surecv {

/// Proximal map g^lambda(theta). Ridge is a closed-form solve of
/// (A/lambda + I) x = theta; Lasso solves the subproblem
///   h = argmin 0.5||A h - theta||^2 + lambda ||h||_1
/// by cyclic coordinate descent with an active-set polish, certified by a
/// KKT residual <= 1e-10. lambda = 0 returns g = 0 exactly.
/// `warmStart`, when given, seeds the Lasso coordinate descent.
ProxResult prox(const PenaltySpec& penalty, double lambda, const Vec& theta,
                const Vec* warmStart = nullptr);

/// grad g^lambda(theta): C_lambda = -(A/lambda + I)^{-1} for Ridge;
/// A_J (A_J'A_J)^{-1} A_J' - I from the active set for Lasso. When
/// proxResult.boundaryFlag is set the active-set value is still returned;
/// callers probing differentiability must perturb theta instead.
Mat grad_g(const PenaltySpec& penalty, double lambda, const Vec& theta,
           const ProxResult& proxResult);

/// Final KKT residual of a Lasso subproblem solution (max over coordinates
/// of the stationarity violation). Exposed for tests and error reporting.
double lasso_kkt_residual(const PenaltySpec& penalty, double lambda, const Vec& theta,
                          const Vec& h);

}  // namespace surecv
