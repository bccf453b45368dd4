#include "surecvlab/penalty.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace surecv {

PenaltySpec PenaltySpec::ridge(const Mat& A) {
  if (A.rows() != A.cols() || A.rows() < 1) throw ConfigError("ridge: A must be square, k >= 1");
  require_finite(A, "A");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ConfigError("ridge: A must be symmetric");

  PenaltySpec s;
  s.kind_ = PenaltyKind::Ridge;
  s.A_ = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s.A_);
  s.eigvals_ = es.eigenvalues();
  s.eigvecs_ = es.eigenvectors();
  if (s.eigvals_.minCoeff() <= tol::kRidgeMinEig)
    throw ConfigError("ridge: A not positive definite (min eigenvalue " +
                      std::to_string(s.eigvals_.minCoeff()) + ")");
  s.Ainv_ = s.eigvecs_ * s.eigvals_.cwiseInverse().asDiagonal() * s.eigvecs_.transpose();
  s.cond_ = s.eigvals_.maxCoeff() / s.eigvals_.minCoeff();
  return s;
}

PenaltySpec PenaltySpec::lasso(const Mat& A) {
  if (A.rows() != A.cols() || A.rows() < 1) throw ConfigError("lasso: A must be square, k >= 1");
  require_finite(A, "A");

  PenaltySpec s;
  s.kind_ = PenaltyKind::Lasso;
  s.A_ = A;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > tol::kLassoMaxCond)
    throw ConfigError("lasso: A not invertible within condition limit (cond " +
                      std::to_string(smin > 0 ? smax / smin : std::numeric_limits<double>::infinity()) + ")");
  s.cond_ = smax / smin;
  s.Ainv_ = A.partialPivLu().inverse();
  s.gram_ = A.transpose() * A;
  return s;
}

double PenaltySpec::penaltyValue(const Vec& theta) const {
  if (theta.size() != dim()) throw ConfigError("penaltyValue: dimension mismatch");
  if (kind_ == PenaltyKind::Ridge) return 0.5 * theta.dot(Ainv_ * theta);
  return (Ainv_ * theta).lpNorm<1>();
}

}  // namespace surecv
