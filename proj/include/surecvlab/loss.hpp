#pragma once

#include "surecvlab/common.hpp"

namespace surecv {

enum class LossKind { LinearSquaredError, LogisticNll };

/// Per-observation losses, convex in beta with closed-form Hessians:
///   LinearSquaredError  l(beta, z) = 0.5 (y - w.beta)^2
///   LogisticNll         l(beta, z) = log(1 + exp(w.beta)) - y * (w.beta)
/// The 1/2 in the linear loss makes E[WW'] = I give a unit limiting Hessian.
struct LossModel {
  LossKind kind = LossKind::LinearSquaredError;
  int featureDim = 0;
};

struct Dataset {
  Mat W;  // n x k features
  Vec Y;  // n outcomes
  int n() const { return static_cast<int>(W.rows()); }
  int k() const { return static_cast<int>(W.cols()); }
};

void validate_dataset(const Dataset& data);

double obs_loss(const LossModel& model, const Eigen::RowVectorXd& w, double y, const Vec& beta);
Vec obs_grad(const LossModel& model, const Eigen::RowVectorXd& w, double y, const Vec& beta);

/// Curvature coefficient c so that the per-observation Hessian is c * w'w.
double obs_curvature(const LossModel& model, const Eigen::RowVectorXd& w, double y,
                     const Vec& beta);

/// Empirical loss and derivatives in the local parameter theta = sqrt(n) beta,
/// with the local scale fixed by `scaleN` (the full-sample n, also for
/// leave-one-out sums):
///   L(theta)      = sum_{i != skip} l(theta / sqrt(scaleN), Z_i)
///   grad L(theta) = (1 / sqrt(scaleN)) sum grad_beta l
///   hess L(theta) = (1 / scaleN) sum hess_beta l
double empirical_loss(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                      int skipIndex = -1);
Vec empirical_grad(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                   int skipIndex = -1);
Mat empirical_hess(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                   int skipIndex = -1);

/// Numerically stable log(1 + exp(u)) and logistic function.
double log1pexp(double u);
double sigmoid(double u);

}  // namespace surecv
