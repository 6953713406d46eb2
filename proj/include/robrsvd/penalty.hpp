#pragma once

#include "robrsvd/common.hpp"

#include <string>

namespace robrsvd {

enum class PenaltyKind {
  /// Integrated squared second derivative of the natural cubic spline interpolant.
  natural_spline,
  /// Squared second differences scaled by 1/h^3; equally spaced grids only.
  second_difference,
};

inline PenaltyKind parse_penalty_kind(const std::string& name) {
  if (name == "natural-spline" || name == "natural_spline") return PenaltyKind::natural_spline;
  if (name == "second-difference" || name == "second_difference")
    return PenaltyKind::second_difference;
  throw ContractViolation("unknown penalty kind '" + name + "'");
}

namespace detail {

/// Gaps and the banded factors of the natural cubic spline penalty
/// Omega = Q R^{-1} Q^T: Q is k x (k-2) with three nonzeros per column,
/// R is (k-2) x (k-2) tridiagonal and positive definite.
template <typename Scalar>
void spline_band_factors(const Vector<Scalar>& grid, Matrix<Scalar>& q, Matrix<Scalar>& r) {
  const Eigen::Index k = grid.size();
  const Vector<Scalar> h = grid.tail(k - 1) - grid.head(k - 1);
  q = Matrix<Scalar>::Zero(k, k - 2);
  r = Matrix<Scalar>::Zero(k - 2, k - 2);
  for (Eigen::Index j = 0; j < k - 2; ++j) {
    q(j, j) = Scalar(1) / h[j];
    q(j + 1, j) = -Scalar(1) / h[j] - Scalar(1) / h[j + 1];
    q(j + 2, j) = Scalar(1) / h[j + 1];
    r(j, j) = (h[j] + h[j + 1]) / Scalar(3);
    if (j + 1 < k - 2) {
      r(j, j + 1) = h[j + 1] / Scalar(6);
      r(j + 1, j) = h[j + 1] / Scalar(6);
    }
  }
}

}  // namespace detail

/// Roughness matrix Omega on the sampling grid: f^T Omega f equals the
/// integrated squared second derivative of the natural cubic spline through
/// (grid, f). Symmetric, nonnegative definite, rank k - 2; constants and the
/// grid itself span the null space.
template <typename Scalar = double>
Matrix<Scalar> build_roughness_penalty(const Vector<Scalar>& grid,
                                       PenaltyKind kind = PenaltyKind::natural_spline) {
  const Eigen::Index k = grid.size();
  require(k >= 3, "roughness penalty needs at least 3 grid points");
  require(strictly_increasing(grid), "roughness penalty grid must be strictly increasing");

  if (kind == PenaltyKind::second_difference) {
    const Scalar h = (grid[k - 1] - grid[0]) / Scalar(k - 1);
    for (Eigen::Index i = 1; i < k; ++i)
      require(std::abs((grid[i] - grid[i - 1]) - h) <= Scalar(1e-8) * h,
              "second-difference penalty requires an equally spaced grid");
    Matrix<Scalar> d = Matrix<Scalar>::Zero(k - 2, k);
    for (Eigen::Index i = 0; i < k - 2; ++i) {
      d(i, i) = 1;
      d(i, i + 1) = -2;
      d(i, i + 2) = 1;
    }
    return (d.transpose() * d) / (h * h * h);
  }

  Matrix<Scalar> q, r;
  detail::spline_band_factors(grid, q, r);
  Eigen::LLT<Matrix<Scalar>> chol(r);
  const Matrix<Scalar> rinv_qt = chol.solve(q.transpose());
  Matrix<Scalar> omega = q * rinv_qt;
  return (omega + omega.transpose()) / Scalar(2);
}

/// Two-way roughness penalty: Omega_u, Omega_v and their smoothing parameters.
template <typename Scalar = double>
struct TwoWayPenaltySpec {
  Matrix<Scalar> omega_u;
  Matrix<Scalar> omega_v;
  Scalar lambda_u = 0;
  Scalar lambda_v = 0;

  static TwoWayPenaltySpec from_grids(const Vector<Scalar>& row_grid, const Vector<Scalar>& col_grid,
                                      PenaltyKind kind = PenaltyKind::natural_spline) {
    return {build_roughness_penalty(row_grid, kind), build_roughness_penalty(col_grid, kind), 0, 0};
  }

  TwoWayPenaltySpec with_lambdas(Scalar lu, Scalar lv) const {
    TwoWayPenaltySpec copy = *this;
    copy.lambda_u = lu;
    copy.lambda_v = lv;
    return copy;
  }

  /// Same penalty with the roles of rows and columns exchanged.
  TwoWayPenaltySpec transposed() const { return {omega_v, omega_u, lambda_v, lambda_u}; }

  void validate(Eigen::Index m, Eigen::Index n) const {
    require(lambda_u >= Scalar(0) && lambda_v >= Scalar(0), "penalty parameters must be nonnegative");
    require(omega_u.rows() == m && omega_u.cols() == m,
            "Omega_u is " + std::to_string(omega_u.rows()) + "x" + std::to_string(omega_u.cols()) +
                ", expected " + std::to_string(m) + "x" + std::to_string(m));
    require(omega_v.rows() == n && omega_v.cols() == n,
            "Omega_v is " + std::to_string(omega_v.rows()) + "x" + std::to_string(omega_v.cols()) +
                ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
};

/// lambda_u u'Omega_u u |v|^2 + lambda_v v'Omega_v v |u|^2 + lambda_u u'Omega_u u lambda_v v'Omega_v v.
template <typename Scalar, typename DerivedU, typename DerivedV>
Scalar two_way_penalty(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                       const TwoWayPenaltySpec<Scalar>& spec) {
  spec.validate(u.size(), v.size());
  const Scalar ru = spec.lambda_u * u.dot(spec.omega_u * u);
  const Scalar rv = spec.lambda_v * v.dot(spec.omega_v * v);
  return ru * v.squaredNorm() + rv * u.squaredNorm() + ru * rv;
}

/// Omega_{v|u} = u'(I + lambda_u Omega_u)u (I + lambda_v Omega_v) - (u'u) I, the
/// quadratic penalty the two-way penalty induces on v when u is held fixed.
template <typename Scalar, typename DerivedU>
Matrix<Scalar> conditional_penalty_v(const Eigen::MatrixBase<DerivedU>& u,
                                     const TwoWayPenaltySpec<Scalar>& spec) {
  require(u.size() == spec.omega_u.rows(), "conditional_penalty_v: u length does not match Omega_u");
  require(spec.lambda_u >= Scalar(0) && spec.lambda_v >= Scalar(0),
          "penalty parameters must be nonnegative");
  const Scalar ru = spec.lambda_u * u.dot(spec.omega_u * u);
  const Scalar a = u.squaredNorm() + ru;
  // a (I + lv Ov) - u'u I, with the identity terms combined to avoid cancellation.
  Matrix<Scalar> out = (a * spec.lambda_v) * spec.omega_v;
  out.diagonal().array() += ru;
  return out;
}

/// Omega_{u|v}; mirror of conditional_penalty_v.
template <typename Scalar, typename DerivedV>
Matrix<Scalar> conditional_penalty_u(const Eigen::MatrixBase<DerivedV>& v,
                                     const TwoWayPenaltySpec<Scalar>& spec) {
  return conditional_penalty_v(v, spec.transposed());
}

}  // namespace robrsvd
