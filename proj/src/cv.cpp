#include "surecvlab/cv.hpp"

#include <algorithm>
#include <cmath>

namespace surecv {
namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("lambda grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0)
      throw ConfigError("lambda grid values must be finite and nonnegative");
    if (i > 0 && grid[i] == grid[i - 1]) throw ConfigError("duplicate lambda in grid");
    if (i > 0 && grid[i] < grid[i - 1]) throw ConfigError("lambda grid must be increasing");
  }
}

std::size_t argmin_tied(const std::vector<double>& lambdas, const std::vector<double>& values) {
  double best = values[0];
  for (double v : values) best = std::min(best, v);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= best + tol::kTie) return i;  // grid sorted: first hit is smallest lambda
  return 0;
}

}  // namespace

CvCurve cv_curve(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                 const std::vector<double>& lambdaGrid, CvMode mode) {
  validate_dataset(data);
  validate_grid(lambdaGrid);
  const int n = data.n();
  const double rootN = std::sqrt(static_cast<double>(n));

  CvCurve curve;
  curve.lambdas = lambdaGrid;
  curve.values.assign(lambdaGrid.size(), 0.0);
  curve.mode = mode;
  curve.n = n;
  curve.k = data.k();

  const std::vector<Vec> fits = fit_penalized_path(model, data, penalty, lambdaGrid);
  for (std::size_t li = 0; li < lambdaGrid.size(); ++li) {
    const double lambda = lambdaGrid[li];
    Mat loo;
    try {
      loo = (mode == CvMode::ExactLoo)
                ? loo_exact(model, data, penalty, lambda)
                : loo_approx(model, data, penalty, lambda, fits[li]);
    } catch (const NumericError& e) {
      throw NumericError("cv_curve at lambda index " + std::to_string(li) + ": " + e.what());
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += obs_loss(model, data.W.row(i), data.Y[i], loo.row(i).transpose() / rootN);
    curve.values[li] = s;
  }
  return curve;
}

TuneResult tune_cv(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                   const std::vector<double>& lambdaGrid, CvMode mode) {
  const CvCurve curve = cv_curve(model, data, penalty, lambdaGrid, mode);
  const std::size_t idx = argmin_tied(curve.lambdas, curve.values);
  TuneResult r;
  r.lambdaStarN = curve.lambdas[idx];
  r.thetaStarN = fit_penalized(model, data, penalty, r.lambdaStarN);
  return r;
}

GapReport cv_sure_gap(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                      const std::vector<double>& lambdaGrid, CvMode mode, const Vec& theta0,
                      const Mat* sigmaTrue) {
  const CvCurve curve = cv_curve(model, data, penalty, lambdaGrid, mode);
  const Vec thetaHat = fit_erm(model, data);
  const InfluenceBundle infl = influence_estimate(model, data, theta0);

  auto gaps = [&](const Mat& sigma, double* raw, double* centered, double* argminSure) {
    std::vector<double> sureVals(curve.lambdas.size());
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
      sureVals[i] = sure(penalty, curve.lambdas[i], thetaHat, sigma);
    double r = 0.0, c = 0.0;
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
      r = std::max(r, std::abs(curve.values[i] - sureVals[i]));
      c = std::max(c, std::abs((curve.values[i] - curve.values[0]) - (sureVals[i] - sureVals[0])));
    }
    *raw = r;
    *centered = c;
    *argminSure = curve.lambdas[argmin_tied(curve.lambdas, sureVals)];
  };

  GapReport rep;
  rep.lambdaRef = curve.lambdas.front();
  rep.argminCv = curve.lambdas[argmin_tied(curve.lambdas, curve.values)];
  gaps(infl.sigmaHat, &rep.rawGap, &rep.centeredGap, &rep.argminSure);
  if (sigmaTrue != nullptr) {
    rep.hasTrueSigma = true;
    gaps(*sigmaTrue, &rep.rawGapTrue, &rep.centeredGapTrue, &rep.argminSureTrue);
  }
  return rep;
}

}  // namespace surecv
