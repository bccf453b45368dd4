#include "surecvlab/erm.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace surecv {
namespace {

constexpr double kGradTol = 1e-10;
constexpr double kIstaTol = 1e-9;
constexpr double kMinEig = 1e-8;
constexpr int kNewtonCap = 200;
constexpr int kIstaCap = 500000;

// L_n(theta) = 0.5 theta'G theta - w'theta + const for the linear model.
struct Quadratic {
  Mat G;
  Vec w;
};

Quadratic linear_stats(const Dataset& data, int scaleN, int skipIndex) {
  const double rootN = std::sqrt(static_cast<double>(scaleN));
  Quadratic q;
  q.G = Mat::Zero(data.k(), data.k());
  q.w = Vec::Zero(data.k());
  for (int i = 0; i < data.n(); ++i) {
    if (i == skipIndex) continue;
    q.G.selfadjointView<Eigen::Lower>().rankUpdate(data.W.row(i).transpose(), 1.0);
    q.w += data.Y[i] * data.W.row(i).transpose();
  }
  q.G = q.G.selfadjointView<Eigen::Lower>();
  q.G /= static_cast<double>(scaleN);
  q.w /= rootN;
  return q;
}

void check_strong_convexity(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo <= kMinEig) {
    std::ostringstream msg;
    msg << "rank-deficient design: min Hessian eigenvalue " << lo;
    throw NumericError(msg.str());
  }
}

Vec newton_minimize(const LossModel& model, const Dataset& data, int scaleN, int skipIndex,
                    const PenaltySpec* ridgePenalty, double lambda, const Vec& start) {
  Vec theta = start;
  const Mat* Ainv = ridgePenalty != nullptr ? &ridgePenalty->Ainv() : nullptr;
  auto objective = [&](const Vec& th) {
    double v = empirical_loss(model, data, th, scaleN, skipIndex);
    if (Ainv != nullptr) v += lambda * 0.5 * th.dot(*Ainv * th);
    return v;
  };
  for (int it = 0; it < kNewtonCap; ++it) {
    Vec g = empirical_grad(model, data, theta, scaleN, skipIndex);
    if (Ainv != nullptr) g += lambda * (*Ainv * theta);
    if (g.norm() <= kGradTol) return theta;
    Mat H = empirical_hess(model, data, theta, scaleN, skipIndex);
    if (Ainv != nullptr) H += lambda * (*Ainv);
    Eigen::LDLT<Mat> ldlt(H);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
      throw NumericError("newton: indefinite Hessian");
    const Vec step = ldlt.solve(g);
    const double f0 = objective(theta);
    const double slope = g.dot(step);
    double t = 1.0;
    while (t > 1e-14 && objective(theta - t * step) > f0 - 0.25 * t * slope) t *= 0.5;
    theta -= t * step;
  }
  Vec g = empirical_grad(model, data, theta, scaleN, skipIndex);
  if (Ainv != nullptr) g += lambda * (*Ainv * theta);
  if (g.norm() <= kGradTol) return theta;
  std::ostringstream msg;
  msg << "newton did not converge: gradient norm " << g.norm();
  throw NumericError(msg.str());
}

Vec fit_erm_impl(const LossModel& model, const Dataset& data, int skipIndex) {
  const int n = data.n();
  if (model.kind == LossKind::LinearSquaredError) {
    const Quadratic q = linear_stats(data, n, skipIndex);
    check_strong_convexity(q.G);
    return q.G.ldlt().solve(q.w);
  }
  check_strong_convexity(empirical_hess(model, data, Vec::Zero(data.k()), n, skipIndex));
  return newton_minimize(model, data, n, skipIndex, nullptr, 0.0, Vec::Zero(data.k()));
}

Vec fit_penalized_impl(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                       double lambda, const Vec* warmStart, int skipIndex) {
  const int n = data.n();
  const int k = data.k();
  if (penalty.dim() != k) throw ConfigError("fit_penalized: penalty dimension mismatch");
  if (lambda == 0.0) return fit_erm_impl(model, data, skipIndex);

  if (penalty.kind() == PenaltyKind::Ridge) {
    if (model.kind == LossKind::LinearSquaredError) {
      const Quadratic q = linear_stats(data, n, skipIndex);
      check_strong_convexity(q.G);
      return (q.G + lambda * penalty.Ainv()).ldlt().solve(q.w);
    }
    const Vec start = warmStart != nullptr ? *warmStart : Vec::Zero(k);
    return newton_minimize(model, data, n, skipIndex, &penalty, lambda, start);
  }

  // Lasso: proximal gradient with backtracking on the step size.
  Vec theta = warmStart != nullptr ? *warmStart : Vec::Zero(k);
  Vec hWarm = penalty.Ainv() * theta;
  double t = 1.0;
  for (int it = 0; it < kIstaCap; ++it) {
    const Vec g = empirical_grad(model, data, theta, n, skipIndex);
    const double f0 = empirical_loss(model, data, theta, n, skipIndex);
    Vec cand;
    Vec diff;
    for (;;) {
      const Vec v = theta - t * g;
      const ProxResult pr = prox(penalty, t * lambda, v, &hWarm);
      cand = pr.fitted;
      diff = cand - theta;
      const double quad = f0 + g.dot(diff) + diff.squaredNorm() / (2.0 * t);
      if (empirical_loss(model, data, cand, n, skipIndex) <=
          quad + 1e-12 * std::max(1.0, std::abs(f0)))
        break;
      t *= 0.5;
      if (t < 1e-18) throw NumericError("fit_penalized(lasso): backtracking underflow");
    }
    const double resid = diff.norm() / t;
    theta = cand;
    hWarm = penalty.Ainv() * theta;
    if (resid <= kIstaTol) return theta;
    t = std::min(t * 2.0, 1e6);
  }
  std::ostringstream msg;
  msg << "fit_penalized(lasso) did not converge in " << kIstaCap << " iterations";
  throw NumericError(msg.str());
}

}  // namespace

Vec fit_erm(const LossModel& model, const Dataset& data) {
  validate_dataset(data);
  return fit_erm_impl(model, data, -1);
}

Vec fit_penalized(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
                  double lambda, const Vec* warmStart) {
  validate_dataset(data);
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ConfigError("fit_penalized: lambda must be finite and nonnegative");
  return fit_penalized_impl(model, data, penalty, lambda, warmStart, -1);
}

std::vector<Vec> fit_penalized_path(const LossModel& model, const Dataset& data,
                                    const PenaltySpec& penalty,
                                    const std::vector<double>& lambdas) {
  validate_dataset(data);
  // Warm-start largest-to-smallest (the Lasso path direction).
  std::vector<std::size_t> order(lambdas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });
  std::vector<Vec> fits(lambdas.size());
  Vec warm = Vec::Zero(data.k());
  for (std::size_t idx : order) {
    warm = fit_penalized_impl(model, data, penalty, lambdas[idx], &warm, -1);
    fits[idx] = warm;
  }
  return fits;
}

Mat loo_exact(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
              double lambda) {
  validate_dataset(data);
  const Vec full = fit_penalized_impl(model, data, penalty, lambda, nullptr, -1);
  Mat out(data.n(), data.k());
  for (int i = 0; i < data.n(); ++i) {
    try {
      out.row(i) = fit_penalized_impl(model, data, penalty, lambda, &full, i).transpose();
    } catch (const NumericError& e) {
      throw NumericError("loo_exact fold " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

Mat loo_approx(const LossModel& model, const Dataset& data, const PenaltySpec& penalty,
               double lambda, const Vec& thetaHatLambda, std::vector<int>* flaggedFolds) {
  validate_dataset(data);
  const int n = data.n();
  const int k = data.k();
  if (thetaHatLambda.size() != k) throw ConfigError("loo_approx: thetaHatLambda dimension mismatch");
  const double rootN = std::sqrt(static_cast<double>(n));
  const Vec beta = thetaHatLambda / rootN;

  const Vec gradFull = empirical_grad(model, data, thetaHatLambda, n, -1);
  const Mat hessFull = empirical_hess(model, data, thetaHatLambda, n, -1);

  Mat out(n, k);
  if (penalty.kind() == PenaltyKind::Ridge || lambda == 0.0) {
    const Mat penHess =
        lambda == 0.0 ? Mat::Zero(k, k) : Mat(lambda * penalty.Ainv());
    const Vec penGrad = lambda == 0.0 ? Vec::Zero(k) : Vec(lambda * (penalty.Ainv() * thetaHatLambda));
    for (int i = 0; i < n; ++i) {
      const Vec gi = obs_grad(model, data.W.row(i), data.Y[i], beta) / rootN;
      const double ci = obs_curvature(model, data.W.row(i), data.Y[i], beta);
      const Mat Hi = (ci / n) * (data.W.row(i).transpose() * data.W.row(i));
      const Mat H = hessFull - Hi + penHess;
      Eigen::LDLT<Mat> ldlt(H);
      if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
        if (flaggedFolds != nullptr) flaggedFolds->push_back(i);
        out.row(i) = fit_penalized_impl(model, data, penalty, lambda, &thetaHatLambda, i).transpose();
        continue;
      }
      out.row(i) = (thetaHatLambda - ldlt.solve(gradFull - gi + penGrad)).transpose();
    }
    return out;
  }

  // Lasso: one Newton step in the active h-coordinates, signs held fixed.
  const Vec h = penalty.Ainv() * thetaHatLambda;
  std::vector<int> J;
  for (int j = 0; j < k; ++j)
    if (std::abs(h[j]) > tol::kSign) J.push_back(j);
  if (J.empty()) {
    out.setZero();
    return out;
  }
  const int m = static_cast<int>(J.size());
  Mat AJ(k, m);
  Vec hJ(m), etaJ(m);
  for (int c = 0; c < m; ++c) {
    AJ.col(c) = penalty.A().col(J[c]);
    hJ[c] = h[J[c]];
    etaJ[c] = h[J[c]] > 0.0 ? 1.0 : -1.0;
  }
  for (int i = 0; i < n; ++i) {
    const Vec gi = obs_grad(model, data.W.row(i), data.Y[i], beta) / rootN;
    const double ci = obs_curvature(model, data.W.row(i), data.Y[i], beta);
    const Mat Hi = (ci / n) * (data.W.row(i).transpose() * data.W.row(i));
    const Vec gradJ = AJ.transpose() * (gradFull - gi) + lambda * etaJ;
    const Mat hessJ = AJ.transpose() * (hessFull - Hi) * AJ;
    Eigen::LDLT<Mat> ldlt(hessJ);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0 ||
        ldlt.vectorD().minCoeff() < 1e-12 * ldlt.vectorD().maxCoeff()) {
      if (flaggedFolds != nullptr) flaggedFolds->push_back(i);
      out.row(i) = fit_penalized_impl(model, data, penalty, lambda, &thetaHatLambda, i).transpose();
      continue;
    }
    const Vec hStep = hJ - ldlt.solve(gradJ);
    out.row(i) = (AJ * hStep).transpose();
  }
  return out;
}

InfluenceBundle influence_estimate(const LossModel& model, const Dataset& data, const Vec& theta0) {
  validate_dataset(data);
  const int n = data.n();
  const int k = data.k();
  if (theta0.size() != k) throw ConfigError("influence_estimate: theta0 dimension mismatch");
  const double rootN = std::sqrt(static_cast<double>(n));
  const Vec beta0 = theta0 / rootN;
  InfluenceBundle b;
  b.scores.resize(n, k);
  for (int i = 0; i < n; ++i)
    b.scores.row(i) = -obs_grad(model, data.W.row(i), data.Y[i], beta0).transpose();
  b.thetaTilde = theta0 + b.scores.colwise().sum().transpose() / rootN;
  b.sigmaHat = (b.scores.transpose() * b.scores) / static_cast<double>(n);
  return b;
}

}  // namespace surecv
