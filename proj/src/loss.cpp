#include "surecvlab/loss.hpp"

#include <cmath>

namespace surecv {

double log1pexp(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

void validate_dataset(const Dataset& data) {
  if (data.W.rows() != data.Y.size()) throw ConfigError("dataset: W rows and Y length differ");
  if (data.n() <= data.k()) throw ConfigError("dataset: requires n > k");
  require_finite(data.W, "W");
  require_finite(data.Y, "Y");
}

double obs_loss(const LossModel& model, const Eigen::RowVectorXd& w, double y, const Vec& beta) {
  const double u = w * beta;
  if (model.kind == LossKind::LinearSquaredError) {
    const double r = y - u;
    return 0.5 * r * r;
  }
  return log1pexp(u) - y * u;
}

Vec obs_grad(const LossModel& model, const Eigen::RowVectorXd& w, double y, const Vec& beta) {
  const double u = w * beta;
  if (model.kind == LossKind::LinearSquaredError) return -(y - u) * w.transpose();
  return (sigmoid(u) - y) * w.transpose();
}

double obs_curvature(const LossModel& model, const Eigen::RowVectorXd& w, double y,
                     const Vec& beta) {
  (void)y;
  if (model.kind == LossKind::LinearSquaredError) return 1.0;
  const double s = sigmoid(w * beta);
  return s * (1.0 - s);
}

double empirical_loss(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                      int skipIndex) {
  const double rootN = std::sqrt(static_cast<double>(scaleN));
  const Vec beta = theta / rootN;
  double s = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    if (i == skipIndex) continue;
    s += obs_loss(model, data.W.row(i), data.Y[i], beta);
  }
  return s;
}

Vec empirical_grad(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                   int skipIndex) {
  const double rootN = std::sqrt(static_cast<double>(scaleN));
  const Vec beta = theta / rootN;
  Vec g = Vec::Zero(data.k());
  for (int i = 0; i < data.n(); ++i) {
    if (i == skipIndex) continue;
    g += obs_grad(model, data.W.row(i), data.Y[i], beta);
  }
  return g / rootN;
}

Mat empirical_hess(const LossModel& model, const Dataset& data, const Vec& theta, int scaleN,
                   int skipIndex) {
  const double rootN = std::sqrt(static_cast<double>(scaleN));
  const Vec beta = theta / rootN;
  const int k = data.k();
  Mat H = Mat::Zero(k, k);
  for (int i = 0; i < data.n(); ++i) {
    if (i == skipIndex) continue;
    const double c = obs_curvature(model, data.W.row(i), data.Y[i], beta);
    H.selfadjointView<Eigen::Lower>().rankUpdate(data.W.row(i).transpose(), c);
  }
  H = H.selfadjointView<Eigen::Lower>();
  return H / static_cast<double>(scaleN);
}

}  // namespace surecv
