#include "surecvlab/prox.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace surecv {
namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

IVec classify_eta(const Vec& h) {
  IVec eta(h.size());
  for (int j = 0; j < h.size(); ++j)
    eta[j] = (std::abs(h[j]) <= tol::kSign) ? 0 : (h[j] > 0.0 ? 1 : -1);
  return eta;
}

std::vector<int> active_from_eta(const IVec& eta) {
  std::vector<int> J;
  for (int j = 0; j < eta.size(); ++j)
    if (eta[j] != 0) J.push_back(j);
  return J;
}

Mat columns(const Mat& A, const std::vector<int>& J) {
  Mat AJ(A.rows(), static_cast<int>(J.size()));
  for (std::size_t c = 0; c < J.size(); ++c) AJ.col(static_cast<int>(c)) = A.col(J[c]);
  return AJ;
}

/// grad g = A_J (A_J'A_J)^{-1} A_J' - I for the active set J given by eta.
Mat lasso_grad_from_eta(const PenaltySpec& p, const IVec& eta) {
  const int k = p.dim();
  Mat grad = -Mat::Identity(k, k);
  const std::vector<int> J = active_from_eta(eta);
  if (J.empty()) return grad;
  const Mat AJ = columns(p.A(), J);
  const Mat gramJ = AJ.transpose() * AJ;
  Eigen::LDLT<Mat> ldlt(gramJ);
  const Vec d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 0.0 ||
      d.minCoeff() < 1e-14 * d.maxCoeff())
    throw NumericError("lasso grad_g: singular A_J'A_J for invertible A; |J| = " +
                       std::to_string(J.size()));
  grad += AJ * ldlt.solve(AJ.transpose());
  return grad;
}

/// Cyclic coordinate descent on the normal-equations form, with an
/// exact active-set solve adopted once the sign pattern stabilizes.
Vec lasso_solve(const PenaltySpec& p, double lambda, const Vec& theta, const Vec* warm,
                double* kktOut) {
  const int k = p.dim();
  const Mat& G = p.gram();
  const Vec b = p.A().transpose() * theta;
  Vec h = (warm != nullptr && warm->size() == k) ? *warm : Vec::Zero(k);
  Vec Gh = G * h;

  int sweeps = 0;
  double kkt = std::numeric_limits<double>::infinity();
  while (sweeps < tol::kMaxSweeps) {
    double maxchg = 0.0;
    do {
      maxchg = 0.0;
      for (int j = 0; j < k; ++j) {
        const double gjj = G(j, j);
        const double r = b[j] - Gh[j] + gjj * h[j];
        const double hj = soft_threshold(r, lambda) / gjj;
        const double d = hj - h[j];
        if (d != 0.0) {
          Gh += d * G.col(j);
          h[j] = hj;
          maxchg = std::max(maxchg, std::abs(d));
        }
      }
      ++sweeps;
    } while (maxchg > 1e-13 * std::max(1.0, h.cwiseAbs().maxCoeff()) &&
             sweeps < tol::kMaxSweeps);

    // Active-set confirmation: solve h_J = (A_J'A_J)^{-1} (A_J'theta - lambda eta_J)
    // exactly and keep it if the signs agree.
    const IVec eta = classify_eta(h);
    const std::vector<int> J = active_from_eta(eta);
    if (!J.empty()) {
      const Mat AJ = columns(p.A(), J);
      Vec etaJ(static_cast<int>(J.size())), bJ(static_cast<int>(J.size()));
      for (std::size_t c = 0; c < J.size(); ++c) {
        etaJ[static_cast<int>(c)] = eta[J[c]];
        bJ[static_cast<int>(c)] = b[J[c]];
      }
      const Vec hJ = (AJ.transpose() * AJ).ldlt().solve(bJ - lambda * etaJ);
      bool signsOk = true;
      for (std::size_t c = 0; c < J.size(); ++c)
        if (hJ[static_cast<int>(c)] * etaJ[static_cast<int>(c)] < 0.0) signsOk = false;
      if (signsOk) {
        Vec hNew = Vec::Zero(k);
        for (std::size_t c = 0; c < J.size(); ++c) hNew[J[c]] = hJ[static_cast<int>(c)];
        h = hNew;
        Gh = G * h;
      }
    }
    kkt = lasso_kkt_residual(p, lambda, theta, h);
    if (kkt <= tol::kKkt) break;
  }
  if (kkt > tol::kKkt) {
    std::ostringstream msg;
    msg << "lasso prox failed to converge in " << tol::kMaxSweeps
        << " sweeps; final KKT residual " << kkt;
    throw NumericError(msg.str());
  }
  if (kktOut != nullptr) *kktOut = kkt;
  return h;
}

}  // namespace

double lasso_kkt_residual(const PenaltySpec& penalty, double lambda, const Vec& theta,
                          const Vec& h) {
  const Vec grad = penalty.gram() * h - penalty.A().transpose() * theta;
  double r = 0.0;
  for (int j = 0; j < h.size(); ++j) {
    if (std::abs(h[j]) > tol::kSign)
      r = std::max(r, std::abs(grad[j] + lambda * (h[j] > 0.0 ? 1.0 : -1.0)));
    else
      r = std::max(r, std::max(0.0, std::abs(grad[j]) - lambda));
  }
  return r;
}

ProxResult prox(const PenaltySpec& penalty, double lambda, const Vec& theta,
                const Vec* warmStart) {
  const int k = penalty.dim();
  if (theta.size() != k) throw ConfigError("prox: theta dimension mismatch");
  require_finite(theta, "theta");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ConfigError("prox: lambda must be finite and nonnegative");

  ProxResult r;
  if (lambda == 0.0) {
    // Unpenalized minimum: exact identity, no division by lambda anywhere.
    r.g = Vec::Zero(k);
    r.fitted = theta;
    r.h = penalty.Ainv() * theta;
    r.gradG = Mat::Zero(k, k);
    if (penalty.kind() == PenaltyKind::Ridge) {
      r.eta = IVec::Zero(k);
      for (int j = 0; j < k; ++j) r.activeSet.push_back(j);
    } else {
      r.eta = classify_eta(r.h);
      r.activeSet = active_from_eta(r.eta);
    }
    return r;
  }

  if (penalty.kind() == PenaltyKind::Ridge) {
    // g = C_lambda theta with C_lambda = -(A/lambda + I)^{-1}, via the
    // stored eigendecomposition of A.
    const Vec scale = (penalty.eigvals().array() / lambda + 1.0).inverse();
    const Vec t = penalty.eigvecs().transpose() * theta;
    const Vec x = penalty.eigvecs() * (scale.array() * t.array()).matrix();
    r.g = -x;
    r.fitted = theta + r.g;
    r.h = penalty.Ainv() * r.fitted;
    r.eta = IVec::Zero(k);
    for (int j = 0; j < k; ++j) r.activeSet.push_back(j);
    r.gradG = -(penalty.eigvecs() * scale.asDiagonal() * penalty.eigvecs().transpose());
    return r;
  }

  r.h = lasso_solve(penalty, lambda, theta, warmStart, nullptr);
  r.fitted = penalty.A() * r.h;
  r.g = r.fitted - theta;
  r.eta = classify_eta(r.h);
  r.activeSet = active_from_eta(r.eta);
  r.gradG = lasso_grad_from_eta(penalty, r.eta);

  const Vec grad = penalty.gram() * r.h - penalty.A().transpose() * theta;
  for (int j = 0; j < k; ++j) {
    if (r.eta[j] != 0 && std::abs(r.h[j]) <= tol::kBoundary) r.boundaryFlag = true;
    if (r.eta[j] == 0 && lambda - std::abs(grad[j]) <= tol::kBoundary * std::max(1.0, lambda))
      r.boundaryFlag = true;
  }
  return r;
}

Mat grad_g(const PenaltySpec& penalty, double lambda, const Vec& theta,
           const ProxResult& proxResult) {
  const int k = penalty.dim();
  if (theta.size() != k || proxResult.eta.size() != k)
    throw ConfigError("grad_g: dimension mismatch");
  if (lambda == 0.0) return Mat::Zero(k, k);
  if (penalty.kind() == PenaltyKind::Ridge) {
    const Vec scale = (penalty.eigvals().array() / lambda + 1.0).inverse();
    return -(penalty.eigvecs() * scale.asDiagonal() * penalty.eigvecs().transpose());
  }
  return lasso_grad_from_eta(penalty, proxResult.eta);
}

}  // namespace surecv
