#include "surecvlab/sure.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace surecv {

DirectionCoords DirectionCoords::from(const Vec& theta) {
  DirectionCoords d;
  d.R = theta.norm();
  if (d.R == 0.0) throw ConfigError("DirectionCoords: theta is the zero vector");
  d.nu = theta / d.R;
  return d;
}

void validate_sigma(const Mat& sigma, int k) {
  if (sigma.rows() != k || sigma.cols() != k) throw ConfigError("sigma: dimension mismatch");
  require_finite(sigma, "sigma");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ConfigError("sigma must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ConfigError("sigma must be positive semi-definite (min eigenvalue " +
                      std::to_string(es.eigenvalues().minCoeff()) + ")");
}

namespace {

double sure_unchecked(const PenaltySpec& penalty, double lambda, const Vec& theta,
                      const Mat& sigma) {
  if (lambda == 0.0) return sigma.trace();
  ProxResult p = prox(penalty, lambda, theta);
  if (penalty.kind() == PenaltyKind::Lasso && p.boundaryFlag) {
    // Right-limit convention at a kink in lambda.
    p = prox(penalty, lambda * (1.0 + 1e-12), theta, &p.h);
  }
  return sigma.trace() + p.g.squaredNorm() + 2.0 * (p.gradG * sigma).trace();
}

/// O(k) per-lambda Ridge SURE in the eigenbasis of A:
/// SURE = tr(Sigma) + sum_i s_i^2 t_i^2 - 2 sum_i s_i w_i, s_i = lambda/(d_i + lambda).
class RidgeSureEval {
public:
  RidgeSureEval(const PenaltySpec& p, const Vec& theta, const Mat& sigma)
      : d_(p.eigvals()), trSigma_(sigma.trace()) {
    const Mat& Q = p.eigvecs();
    t2_ = (Q.transpose() * theta).array().square();
    w_ = (Q.transpose() * (sigma * Q)).diagonal();
  }
  double operator()(double lambda) const {
    if (lambda == 0.0) return trSigma_;
    double quad = 0.0, tr = 0.0;
    for (int i = 0; i < d_.size(); ++i) {
      const double s = lambda / (d_[i] + lambda);
      quad += s * s * t2_[i];
      tr += s * w_[i];
    }
    return trSigma_ + quad - 2.0 * tr;
  }

private:
  Vec d_;
  Eigen::ArrayXd t2_;
  Vec w_;
  double trSigma_;
};

}  // namespace

double sure(const PenaltySpec& penalty, double lambda, const Vec& theta, const Mat& sigma) {
  validate_sigma(sigma, penalty.dim());
  return sure_unchecked(penalty, lambda, theta, sigma);
}

SureCurve sure_curve(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                     const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw ConfigError("sure_curve: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw ConfigError("sure_curve: lambdas must be strictly increasing");
  if (lambdas.front() < 0.0) throw ConfigError("sure_curve: lambdas must be nonnegative");
  validate_sigma(sigma, penalty.dim());
  SureCurve c;
  c.lambdas = lambdas;
  c.values.reserve(lambdas.size());
  for (double l : lambdas) {
    const double v = sure_unchecked(penalty, l, theta, sigma);
    if (!std::isfinite(v)) throw NumericError("sure_curve: non-finite value");
    c.values.push_back(v);
  }
  return c;
}

namespace {

Mat columns(const Mat& A, const std::vector<int>& J) {
  Mat AJ(A.rows(), static_cast<int>(J.size()));
  for (std::size_t c = 0; c < J.size(); ++c) AJ.col(static_cast<int>(c)) = A.col(J[c]);
  return AJ;
}

double segment_curvature(const PenaltySpec& p, const IVec& eta) {
  std::vector<int> J;
  for (int j = 0; j < eta.size(); ++j)
    if (eta[j] != 0) J.push_back(j);
  if (J.empty()) return 0.0;
  const Mat AJ = columns(p.A(), J);
  Vec etaJ(static_cast<int>(J.size()));
  for (std::size_t c = 0; c < J.size(); ++c) etaJ[static_cast<int>(c)] = eta[J[c]];
  return etaJ.dot((AJ.transpose() * AJ).ldlt().solve(etaJ));
}

int ipow3(int k) {
  int r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

/// Golden-section minimization of f on [a, b] to width kGoldenTol.
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b) {
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && (b - a) > detail::kGoldenTol + 1e-12 * std::max(std::abs(a), std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

struct Candidate {
  double lambda;
  double value;
  bool saturated = false;
  bool flatTail = false;
};

Candidate pick_best(std::vector<Candidate> cands) {
  if (cands.empty()) throw NumericError("minimize_sure: no candidates");
  double best = cands.front().value;
  for (const auto& c : cands) best = std::min(best, c.value);
  // Smallest lambda among the argmin set (ties within 1e-10).
  Candidate win;
  bool have = false;
  for (const auto& c : cands) {
    if (c.value <= best + tol::kTie && (!have || c.lambda < win.lambda)) {
      win = c;
      have = true;
    }
  }
  return win;
}

std::vector<Candidate> ridge_candidates(const PenaltySpec& penalty, const Vec& theta,
                                        const Mat& sigma) {
  const RidgeSureEval eval(penalty, theta, sigma);
  const auto f = [&](double l) { return eval(l); };
  const std::vector<double> grid = detail::ridge_log_grid();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);

  std::vector<Candidate> cands;
  cands.push_back({0.0, f(0.0), false, false});
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (v[i] <= v[i - 1] && v[i] <= v[i + 1]) {
      auto [lm, fm] = golden_min(f, grid[i - 1], grid[i + 1]);
      cands.push_back({lm, fm, false, false});
    }
  }
  if (v.front() < v[1]) {  // basin against the left edge
    auto [lm, fm] = golden_min(f, 0.0, grid[1]);
    cands.push_back({lm, fm, false, false});
  }
  if (v.back() <= v[v.size() - 2]) {  // decreasing into the upper bound
    auto [lm, fm] = golden_min(f, grid[grid.size() - 2], grid.back());
    const bool sat = lm >= detail::kRidgeGridHi * (1.0 - 1e-6);
    cands.push_back({sat ? detail::kRidgeGridHi : lm, sat ? f(detail::kRidgeGridHi) : fm, sat, false});
  }
  return cands;
}

std::vector<Candidate> lasso_candidates(const PenaltySpec& penalty, const Vec& theta,
                                        const Mat& sigma) {
  std::vector<Candidate> cands;
  cands.push_back({0.0, sigma.trace(), false, false});
  if ((penalty.A().transpose() * theta).cwiseAbs().maxCoeff() == 0.0) return cands;
  const SegmentList seg = lasso_breakpoints(penalty, theta);
  for (std::size_t j = 0; j < seg.breakpoints.size(); ++j) {
    const double l = seg.breakpoints[j];
    const bool flat = (j + 1 == seg.breakpoints.size());  // right-limit of lambda_m is the eta = 0 tail
    cands.push_back({l, sure_unchecked(penalty, l, theta, sigma), false, flat});
  }
  // One explicit point inside the terminal flat segment.
  const double lf = seg.breakpoints.back() * 2.0;
  cands.push_back({lf, sure_unchecked(penalty, lf, theta, sigma), false, true});
  return cands;
}

}  // namespace

namespace detail {
std::vector<double> ridge_log_grid() {
  std::vector<double> g(kRidgeGridPoints);
  const double la = std::log10(kRidgeGridLo), lb = std::log10(kRidgeGridHi);
  for (int i = 0; i < kRidgeGridPoints; ++i)
    g[i] = std::pow(10.0, la + (lb - la) * i / double(kRidgeGridPoints - 1));
  return g;
}
}  // namespace detail

MinSureResult minimize_sure(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                            const LambdaSet& lambdaSet) {
  validate_sigma(sigma, penalty.dim());
  require_finite(theta, "theta");

  std::vector<Candidate> cands;
  if (lambdaSet.kind == LambdaSetKind::FiniteGrid) {
    if (lambdaSet.grid.empty()) throw ConfigError("minimize_sure: empty lambda grid");
    for (std::size_t i = 0; i < lambdaSet.grid.size(); ++i) {
      const double l = lambdaSet.grid[i];
      if (!(l >= 0.0) || !std::isfinite(l))
        throw ConfigError("minimize_sure: grid values must be finite and nonnegative");
      if (i > 0 && !(l > lambdaSet.grid[i - 1]))
        throw ConfigError("minimize_sure: grid must be strictly increasing");
      cands.push_back({l, sure_unchecked(penalty, l, theta, sigma), false, false});
    }
  } else if (penalty.kind() == PenaltyKind::Ridge) {
    cands = ridge_candidates(penalty, theta, sigma);
  } else {
    cands = lasso_candidates(penalty, theta, sigma);
  }

  const Candidate win = pick_best(std::move(cands));
  MinSureResult r;
  r.lambdaStar = win.lambda;
  r.sureStar = win.value;
  r.saturated = win.saturated;
  r.flatTail = win.flatTail;
  if (penalty.kind() == PenaltyKind::Lasso && lambdaSet.kind == LambdaSetKind::FiniteGrid &&
      win.lambda > 0.0) {
    r.flatTail = prox(penalty, win.lambda * (1.0 + 1e-12), theta).activeSet.empty();
  }
  return r;
}

std::vector<LocalMinimum> local_minima(const PenaltySpec& penalty, const Vec& theta,
                                       const Mat& sigma) {
  validate_sigma(sigma, penalty.dim());
  std::vector<LocalMinimum> out;
  if (penalty.kind() == PenaltyKind::Ridge) {
    const RidgeSureEval eval(penalty, theta, sigma);
    const auto f = [&](double l) { return eval(l); };
    const std::vector<double> grid = detail::ridge_log_grid();
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (v[i] <= v[i - 1] && v[i] <= v[i + 1]) {
        auto [lm, fm] = golden_min(f, grid[i - 1], grid[i + 1]);
        bool dup = false;
        for (const auto& m : out)
          if (std::abs(m.lambda - lm) <= 1e-6 * std::max(1.0, lm)) dup = true;
        if (!dup) out.push_back({lm, fm, false});
      }
    }
    if (!v.empty() && v.front() < v[1]) {
      auto [lm, fm] = golden_min(f, 0.0, grid[1]);
      out.insert(out.begin(), {lm, fm, false});
    }
  } else {
    // Candidates: lambda = 0 plus every breakpoint where the right-limit
    // drops below the left-limit (the df jump).
    out.push_back({0.0, sigma.trace(), false});
    if ((penalty.A().transpose() * theta).cwiseAbs().maxCoeff() > 0.0) {
      const SegmentList seg = lasso_breakpoints(penalty, theta);
      for (double l : seg.breakpoints) {
        const double right = sure_unchecked(penalty, l, theta, sigma);
        const double left = sure_unchecked(penalty, l * (1.0 - 1e-12), theta, sigma);
        if (right < left - 1e-12) out.push_back({l, right, false});
      }
    }
  }
  double best = out.front().value;
  for (const auto& m : out) best = std::min(best, m.value);
  for (auto& m : out) m.global = (m.value <= best + tol::kTie);
  std::sort(out.begin(), out.end(),
            [](const LocalMinimum& a, const LocalMinimum& b) { return a.lambda < b.lambda; });
  return out;
}

SegmentList lasso_breakpoints(const PenaltySpec& penalty, const Vec& theta) {
  if (penalty.kind() != PenaltyKind::Lasso)
    throw ConfigError("lasso_breakpoints: penalty must be Lasso");
  const int k = penalty.dim();
  if (theta.size() != k) throw ConfigError("lasso_breakpoints: theta dimension mismatch");
  require_finite(theta, "theta");
  const Mat& A = penalty.A();
  const Vec b = A.transpose() * theta;
  const double lambdaMax = b.cwiseAbs().maxCoeff();
  if (lambdaMax == 0.0)
    throw ConfigError("lasso_breakpoints: A'theta = 0, the path is empty");

  SegmentList seg;
  std::vector<std::pair<double, IVec>> events;  // (breakpoint, eta just below it)

  IVec eta = IVec::Zero(k);
  double lambdaCur = std::numeric_limits<double>::infinity();
  const int cap = 10 * ipow3(k) + 10;
  const double tiny = 1e-14 * std::max(1.0, lambdaMax);

  for (int iter = 0; iter < cap; ++iter) {
    std::vector<int> J;
    for (int j = 0; j < k; ++j)
      if (eta[j] != 0) J.push_back(j);

    // On the current segment h_J(l) = pJ - l qJ and the correlation vector
    // c(l) = A'(theta - A_J h_J(l)) = r0 + l r1 is affine in l.
    Vec pFull = Vec::Zero(k), qFull = Vec::Zero(k);
    Vec r0 = b, r1 = Vec::Zero(k);
    if (!J.empty()) {
      const Mat AJ = columns(A, J);
      Vec etaJ(static_cast<int>(J.size())), bJ(static_cast<int>(J.size()));
      for (std::size_t c = 0; c < J.size(); ++c) {
        etaJ[static_cast<int>(c)] = eta[J[c]];
        bJ[static_cast<int>(c)] = (AJ.transpose() * theta)(static_cast<int>(c));
      }
      const Eigen::LDLT<Mat> ldlt((AJ.transpose() * AJ).eval());
      const Vec pJ = ldlt.solve(bJ);
      const Vec qJ = ldlt.solve(etaJ);
      for (std::size_t c = 0; c < J.size(); ++c) {
        pFull[J[c]] = pJ[static_cast<int>(c)];
        qFull[J[c]] = qJ[static_cast<int>(c)];
      }
      r0 = A.transpose() * (theta - AJ * pJ);
      r1 = A.transpose() * (AJ * qJ);
    }

    // Next event below lambdaCur: an inactive constraint turning tight or an
    // active coordinate crossing zero.
    double nextL = -1.0;
    int nextJ = -1, nextSign = 0;
    bool nextIsLeave = false;
    int nearTies = 0;
    auto consider = [&](double l, int j, int sgn, bool leave) {
      if (!(l > tiny) || !(l < lambdaCur * (1.0 - 1e-12))) return;
      if (l > nextL + 1e-10) {
        nextL = l;
        nextJ = j;
        nextSign = sgn;
        nextIsLeave = leave;
        nearTies = 0;
      } else if (std::abs(l - nextL) <= 1e-10) {
        ++nearTies;
      }
    };
    for (int j = 0; j < k; ++j) {
      if (eta[j] == 0) {
        const double denPlus = 1.0 - r1[j];
        const double denMinus = 1.0 + r1[j];
        if (std::abs(denPlus) > 1e-14) consider(r0[j] / denPlus, j, +1, false);
        if (std::abs(denMinus) > 1e-14) consider(-r0[j] / denMinus, j, -1, false);
      } else if (std::abs(qFull[j]) > 1e-14) {
        consider(pFull[j] / qFull[j], j, 0, true);
      }
    }

    if (nextL <= 0.0) break;  // segment extends to lambda = 0
    if (nearTies > 0) seg.degeneracyWarning = true;
    events.push_back({nextL, eta});
    if (nextIsLeave)
      eta[nextJ] = 0;
    else
      eta[nextJ] = nextSign;
    lambdaCur = nextL;
  }
  if (static_cast<int>(events.size()) >= cap)
    throw NumericError("lasso_breakpoints: path did not terminate (degenerate instance)");

  // events are in descending lambda; the stored eta is the pattern *above*
  // each breakpoint. Reassemble ascending with per-segment patterns.
  seg.breakpoints.resize(events.size());
  seg.etaPerSegment.resize(events.size() + 1);
  for (std::size_t i = 0; i < events.size(); ++i)
    seg.breakpoints[i] = events[events.size() - 1 - i].first;
  // Segment below the lowest breakpoint carries the final eta of the sweep.
  seg.etaPerSegment[0] = eta;
  for (std::size_t i = 0; i < events.size(); ++i)
    seg.etaPerSegment[i + 1] = events[events.size() - 1 - i].second;

  const int maxSegments = ipow3(k);
  if (static_cast<int>(seg.etaPerSegment.size()) > maxSegments)
    throw NumericError("lasso_breakpoints: segment count exceeds 3^k");

  seg.curvaturePerSegment.resize(seg.etaPerSegment.size());
  for (std::size_t i = 0; i < seg.etaPerSegment.size(); ++i)
    seg.curvaturePerSegment[i] = segment_curvature(penalty, seg.etaPerSegment[i]);

  // Validation: the path evaluated at segment midpoints must match cold-start
  // prox solutions.
  for (std::size_t i = 0; i + 1 < seg.etaPerSegment.size(); ++i) {
    const double lo = (i == 0) ? 0.0 : seg.breakpoints[i - 1];
    const double hi = seg.breakpoints[i];
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) continue;
    const ProxResult pr = prox(penalty, mid, theta);
    // Path value at mid from the segment's active set.
    std::vector<int> J;
    const IVec& e = seg.etaPerSegment[i];
    for (int j = 0; j < k; ++j)
      if (e[j] != 0) J.push_back(j);
    Vec hPath = Vec::Zero(k);
    if (!J.empty()) {
      const Mat AJ = columns(A, J);
      Vec etaJ(static_cast<int>(J.size()));
      for (std::size_t c = 0; c < J.size(); ++c) etaJ[static_cast<int>(c)] = e[J[c]];
      const Vec hJ = (AJ.transpose() * AJ).ldlt().solve((AJ.transpose() * theta - mid * etaJ).eval());
      for (std::size_t c = 0; c < J.size(); ++c) hPath[J[c]] = hJ[static_cast<int>(c)];
    }
    if ((hPath - pr.h).cwiseAbs().maxCoeff() > 1e-7 * std::max(1.0, pr.h.cwiseAbs().maxCoeff())) {
      std::ostringstream msg;
      msg << "lasso_breakpoints: midpoint validation failed at lambda = " << mid;
      throw NumericError(msg.str());
    }
  }
  return seg;
}

double supermodularity_gap(const PenaltySpec& penalty, const Vec& nu,
                           const std::vector<double>& Rgrid,
                           const std::vector<double>& lambdaGrid, const Mat& sigma) {
  if (penalty.kind() != PenaltyKind::Ridge)
    throw ConfigError("supermodularity_gap: penalty must be Ridge");
  if (Rgrid.size() < 2 || lambdaGrid.size() < 2)
    throw ConfigError("supermodularity_gap: grids need at least 2 points");
  for (std::size_t i = 1; i < Rgrid.size(); ++i)
    if (Rgrid[i] < Rgrid[i - 1]) throw ConfigError("supermodularity_gap: Rgrid must be non-decreasing");
  for (std::size_t i = 1; i < lambdaGrid.size(); ++i)
    if (lambdaGrid[i] < lambdaGrid[i - 1])
      throw ConfigError("supermodularity_gap: lambdaGrid must be non-decreasing");

  validate_sigma(sigma, penalty.dim());
  Mat S(lambdaGrid.size(), Rgrid.size());
  for (std::size_t j = 0; j < Rgrid.size(); ++j) {
    const RidgeSureEval eval(penalty, (Rgrid[j] * nu).eval(), sigma);
    for (std::size_t i = 0; i < lambdaGrid.size(); ++i) S(i, j) = eval(lambdaGrid[i]);
  }

  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < lambdaGrid.size(); ++i)
    for (std::size_t j = 0; j + 1 < Rgrid.size(); ++j)
      gap = std::min(gap, (S(i + 1, j + 1) - S(i, j + 1)) - (S(i + 1, j) - S(i, j)));
  return gap;
}

std::vector<SawtoothPoint> sawtooth_profile(const PenaltySpec& penalty, const Vec& nu,
                                            const std::vector<double>& Rgrid, const Mat& sigma) {
  if (penalty.kind() != PenaltyKind::Lasso)
    throw ConfigError("sawtooth_profile: penalty must be Lasso");
  if (Rgrid.empty()) throw ConfigError("sawtooth_profile: empty Rgrid");
  for (std::size_t i = 0; i < Rgrid.size(); ++i) {
    if (!(Rgrid[i] > 0.0)) throw ConfigError("sawtooth_profile: Rgrid must be positive");
    if (i > 0 && !(Rgrid[i] > Rgrid[i - 1]))
      throw ConfigError("sawtooth_profile: Rgrid must be increasing");
  }
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw ConfigError("sawtooth_profile: nu must be a unit vector");

  const SegmentList unit = lasso_breakpoints(penalty, nu);
  std::vector<SawtoothPoint> out;
  int prevIdx = std::numeric_limits<int>::max();
  for (double R : Rgrid) {
    const MinSureResult m = minimize_sure(penalty, R * nu, sigma, LambdaSet::allNonneg());
    int idx = -1;
    if (m.lambdaStar <= 1e-12) {
      idx = 0;
    } else {
      const double ratio = m.lambdaStar / R;
      for (std::size_t j = 0; j < unit.breakpoints.size(); ++j)
        if (std::abs(ratio - unit.breakpoints[j]) <= 1e-9 * std::max(1.0, unit.breakpoints[j]))
          idx = static_cast<int>(j) + 1;
      if (idx < 0)
        throw NumericError("sawtooth_profile: lambda*(R)/R is not a unit breakpoint at R = " +
                           std::to_string(R));
      if (std::abs(m.lambdaStar - R * unit.breakpoints[idx - 1]) >
          1e-9 * std::max(1.0, R * unit.breakpoints[idx - 1]))
        throw NumericError("sawtooth_profile: lambda*(R) != R * lambda_j at R = " + std::to_string(R));
    }
    if (idx > prevIdx)
      throw NumericError("sawtooth_profile: segment index increased in R (at R = " +
                         std::to_string(R) + ")");
    prevIdx = idx;
    out.push_back({R, m.lambdaStar, idx});
  }
  return out;
}

double well_separation(const PenaltySpec& penalty, const Vec& theta, const Mat& sigma,
                       double lambdaStar, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("well_separation: epsilon must be positive");
  validate_sigma(sigma, penalty.dim());
  const double lo = lambdaStar - epsilon, hi = lambdaStar + epsilon;
  std::vector<double> cands;
  if (penalty.kind() == PenaltyKind::Ridge) {
    cands = detail::ridge_log_grid();
    for (const auto& m : local_minima(penalty, theta, sigma)) cands.push_back(m.lambda);
  } else {
    cands.push_back(0.0);
    if ((penalty.A().transpose() * theta).cwiseAbs().maxCoeff() > 0.0) {
      const SegmentList seg = lasso_breakpoints(penalty, theta);
      for (double l : seg.breakpoints) cands.push_back(l);
      cands.push_back(seg.breakpoints.back() * 2.0);
    }
  }
  cands.push_back(0.0);
  if (lo > 0.0) cands.push_back(lo);
  cands.push_back(hi);

  const double base = sure_unchecked(penalty, lambdaStar, theta, sigma);
  double inf = std::numeric_limits<double>::infinity();
  for (double l : cands) {
    if (l < 0.0 || (l > lo && l < hi)) continue;
    inf = std::min(inf, sure_unchecked(penalty, l, theta, sigma));
  }
  return inf - base;
}

}  // namespace surecv
