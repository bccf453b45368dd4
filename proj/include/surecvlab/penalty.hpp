#pragma once

#include <vector>

#include "surecvlab/common.hpp"

namespace surecv {

enum class PenaltyKind { Ridge, Lasso };

/// Penalty pi(theta): Ridge 0.5 * theta' A^{-1} theta with A positive
/// definite, or Lasso ||A^{-1} theta||_1 with A invertible. Immutable after
/// construction and shareable across threads; factorizations are computed
/// once here and reused by every per-lambda solve.
class PenaltySpec {
public:
  static PenaltySpec ridge(const Mat& A);
  static PenaltySpec lasso(const Mat& A);

  PenaltyKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(A_.rows()); }
  const Mat& A() const { return A_; }
  const Mat& Ainv() const { return Ainv_; }
  double conditionNumber() const { return cond_; }

  // Ridge factorization: A = eigvecs * diag(eigvals) * eigvecs'.
  const Mat& eigvecs() const { return eigvecs_; }
  const Vec& eigvals() const { return eigvals_; }

  // Lasso cache: Gram matrix A'A.
  const Mat& gram() const { return gram_; }

  double penaltyValue(const Vec& theta) const;

private:
  PenaltySpec() = default;
  PenaltyKind kind_ = PenaltyKind::Ridge;
  Mat A_, Ainv_, gram_, eigvecs_;
  Vec eigvals_;
  double cond_ = 1.0;
};

/// Output of the proximal map g^lambda(theta) = argmin_g 0.5||g||^2 +
/// lambda * pi(theta + g). `fitted` = theta + g is the shrunk point and
/// `h` = A^{-1} * fitted is the Lasso coefficient vector.
struct ProxResult {
  Vec g;
  Vec fitted;
  Vec h;
  IVec eta;                    // sign(h_j), |h_j| <= 1e-9 mapped to 0; all-zero for Ridge
  std::vector<int> activeSet;  // {j : eta_j != 0}; all coordinates for Ridge
  Mat gradG;                   // grad g^lambda(theta), operator norm <= 1
  bool boundaryFlag = false;   // true at a non-differentiability point of g^lambda
};

namespace tol {
inline constexpr double kSign = 1e-9;      // |h_j| below this classifies eta_j = 0
inline constexpr double kBoundary = 1e-7;  // proximity to a kink that sets boundaryFlag
inline constexpr double kKkt = 1e-10;      // Lasso subproblem KKT residual target
inline constexpr double kTie = 1e-10;      // SURE/CV values within this are tied
inline constexpr double kRidgeMinEig = 1e-10;
inline constexpr double kLassoMaxCond = 1e12;
inline constexpr int kMaxSweeps = 100000;  // coordinate-descent sweep cap
}  // namespace tol

}  // namespace surecv
