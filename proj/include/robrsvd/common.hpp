#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace robrsvd {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Observation mask; true marks an observed cell.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// A precondition of a public operation was violated by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The numerical problem is degenerate (singular system, zero scale, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

template <typename Scalar>
bool strictly_increasing(const Vector<Scalar>& grid) {
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) return false;
  return true;
}

/// k equally spaced points covering [0, 1] (endpoints included).
template <typename Scalar = double>
Vector<Scalar> unit_grid(Eigen::Index k) {
  if (k == 1) return Vector<Scalar>::Zero(1);
  return Vector<Scalar>::LinSpaced(k, Scalar(0), Scalar(1));
}

enum class Method { svd, rsvd, robrsvd };

inline std::string to_string(Method method) {
  switch (method) {
    case Method::svd: return "svd";
    case Method::rsvd: return "rsvd";
    case Method::robrsvd: return "robrsvd";
  }
  return "unknown";
}

inline Method parse_method(const std::string& name) {
  if (name == "svd") return Method::svd;
  if (name == "rsvd") return Method::rsvd;
  if (name == "robrsvd") return Method::robrsvd;
  throw ContractViolation("unknown method '" + name + "' (expected svd, rsvd or robrsvd)");
}

}  // namespace robrsvd
