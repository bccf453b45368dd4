#pragma once

#include <vector>

#include "surecvlab/prox.hpp"

namespace surecv {

/// Polar coordinates of an estimate: R = ||theta||, nu = theta / R.
struct DirectionCoords {
  double R = 0.0;
  Vec nu;
  static DirectionCoords from(const Vec& theta);
};

/// SURE(lambda, theta, Sigma) = trace(Sigma) + ||g||^2 + 2 trace(grad g * Sigma).
/// Exact trace(Sigma) at lambda = 0. At a Lasso kink the right-limit value is
/// returned (active set evaluated at lambda * (1 + 1e-12)).
double sure(const PenaltySpec& penalty, double lambda, const Vec& theta, const Mat& sigma);

struct SureCurve {
  std::vector<double> lambdas;  // strictly increasing
  std::vector<double> values;
};
SureCurve sure_curve(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                     const std::vector<double>& lambdas);

/// Segment structure of the Lasso path in lambda for fixed theta:
/// breakpoints lambda_1 < ... < lambda_m (lambda_m = ||A'theta||_inf, above
/// which h = 0) and the sign pattern / curvature eta_J'(A_J'A_J)^{-1}eta_J of
/// each of the m+1 segments [0,l1), (l1,l2), ..., [lm, inf).
struct SegmentList {
  std::vector<double> breakpoints;
  std::vector<IVec> etaPerSegment;            // size breakpoints.size() + 1
  std::vector<double> curvaturePerSegment;    // same size as etaPerSegment
  bool degeneracyWarning = false;
};
SegmentList lasso_breakpoints(const PenaltySpec& penalty, const Vec& theta);

enum class LambdaSetKind { AllNonneg, FiniteGrid };
struct LambdaSet {
  LambdaSetKind kind = LambdaSetKind::AllNonneg;
  std::vector<double> grid;
  static LambdaSet allNonneg() { return {LambdaSetKind::AllNonneg, {}}; }
  static LambdaSet finiteGrid(std::vector<double> g) { return {LambdaSetKind::FiniteGrid, std::move(g)}; }
};

struct MinSureResult {
  double lambdaStar = 0.0;
  double sureStar = 0.0;
  bool saturated = false;  // Ridge search hit the upper grid bound 1e6
  bool flatTail = false;   // Lasso minimum lies in the fully-shrunk flat segment
};

/// argmin_lambda SURE with the min-of-argmin tie-break (values within 1e-10
/// are tied). Ridge over AllNonneg: 200-point log grid on [1e-4, 1e6], all
/// grid-local basins refined by golden section. Lasso over AllNonneg:
/// breakpoint right-limits plus lambda = 0 plus a flat-tail point.
MinSureResult minimize_sure(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                            const LambdaSet& lambdaSet);

struct LocalMinimum {
  double lambda;
  double value;
  bool global = false;
};
/// All local minima of lambda -> SURE for reporting (Ridge: refined interior
/// basins of the log grid; Lasso: lambda = 0 and every breakpoint whose
/// right-limit drops below the left-limit). `global` marks members of the
/// argmin set under the 1e-10 tie tolerance.
std::vector<LocalMinimum> local_minima(const PenaltySpec& penalty, const Vec& theta,
                                       const Mat& sigma);

/// Minimum over adjacent (lambda, R) rectangles of the double difference
/// [S(l2,R2)-S(l1,R2)] - [S(l2,R1)-S(l1,R1)]; strictly positive for Ridge.
double supermodularity_gap(const PenaltySpec& penalty, const Vec& nu,
                           const std::vector<double>& Rgrid,
                           const std::vector<double>& lambdaGrid, const Mat& sigma);

struct SawtoothPoint {
  double R;
  double lambdaStar;
  int segmentIndex;  // 1-based index into the unit-direction breakpoints; 0 means lambda* = 0
};
/// lambda*(R, nu) profile over Rgrid for Lasso; asserts lambda*(R) = R * lambda_{j(R)}
/// within 1e-9 and j(R) non-increasing.
std::vector<SawtoothPoint> sawtooth_profile(const PenaltySpec& penalty, const Vec& nu,
                                            const std::vector<double>& Rgrid, const Mat& sigma);

/// inf over lambda outside [lambdaStar - epsilon, lambdaStar + epsilon] of
/// SURE minus SURE(lambdaStar), evaluated on the refinement grid (Ridge) or
/// the breakpoint candidates (Lasso), both augmented with the interval
/// endpoints.
double well_separation(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                       double lambdaStar, double epsilon);

/// Validates sigma: symmetric, min eigenvalue >= -1e-10. Throws ConfigError.
void validate_sigma(const Mat& sigma, int k);

namespace detail {
// Ridge AllNonneg search grid (exposed so well_separation reuses it).
inline constexpr double kRidgeGridLo = 1e-4;
inline constexpr double kRidgeGridHi = 1e6;
inline constexpr int kRidgeGridPoints = 200;
inline constexpr double kGoldenTol = 1e-8;
std::vector<double> ridge_log_grid();
}  // namespace detail

}  // namespace surecv
