#pragma once

#include "surecvlab/erm.hpp"
#include "surecvlab/sure.hpp"

namespace surecv {

enum class CvMode { ExactLoo, ApproxLoo };

/// CV_n(lambda) = sum_i l_n(theta_hat^{lambda,-i}, Z_i), the paper's unscaled
/// sum convention.
struct CvCurve {
  std::vector<double> lambdas;
  std::vector<double> values;
  CvMode mode = CvMode::ExactLoo;
  int n = 0, k = 0;
};

CvCurve cv_curve(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                 const std::vector<double>& lambdaGrid, CvMode mode);

struct TuneResult {
  double lambdaStarN = 0.0;
  Vec thetaStarN;
};

/// argmin over the grid with the min tie-break (values within 1e-10 tied);
/// returns the penalized fit at lambda*.
TuneResult tune_cv(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                   const std::vector<double>& lambdaGrid, CvMode mode);

struct GapReport {
  double rawGap = 0.0;       // sup_lambda |CV - SURE(theta_hat, Sigma_hat)|
  double centeredGap = 0.0;  // sup_lambda |(CV - CV(ref)) - (SURE - SURE(ref))|
  double lambdaRef = 0.0;    // smallest grid point
  double argminCv = 0.0;
  double argminSure = 0.0;
  bool hasTrueSigma = false;
  double rawGapTrue = 0.0;
  double centeredGapTrue = 0.0;
  double argminSureTrue = 0.0;
};

/// Lemma-5 measurement: both raw and centered sup-gaps between CV_n and
/// SURE(lambda, theta_hat_n, Sigma_hat_n); theta0 must be known (simulation
/// setting). SURE is additionally evaluated at sigmaTrue when supplied.
GapReport cv_sure_gap(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                      const std::vector<double>& lambdaGrid, CvMode mode, const Vec& theta0,
                      const Mat* sigmaTrue = nullptr);

}  // namespace surecv
