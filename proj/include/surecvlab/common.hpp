#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace surecv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;

/// Bad user-supplied configuration or arguments (CLI maps this to exit 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at runtime: non-convergence, singularity, non-finite
/// data (CLI maps this to exit 3).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline void require_finite(const Vec& v, const char* name) {
  if (!v.allFinite()) throw NumericError(std::string("non-finite entries in ") + name);
}
inline void require_finite(const Mat& m, const char* name) {
  if (!m.allFinite()) throw NumericError(std::string("non-finite entries in ") + name);
}

}  // namespace surecv
