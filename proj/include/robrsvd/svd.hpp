#pragma once

#include "robrsvd/common.hpp"

#include <algorithm>

namespace robrsvd {

template <typename Scalar = double>
struct SingularTriple {
  Scalar s = 0;
  Vector<Scalar> u;
  Vector<Scalar> v;
};

/// Flip (u, v) jointly so the entry of v with the largest magnitude is positive.
template <typename Scalar>
void apply_sign_convention(Vector<Scalar>& u, Vector<Scalar>& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < Scalar(0)) {
    u = -u;
    v = -v;
  }
}

/// Leading singular triple of a dense matrix. The leading eigenvector of the
/// smaller Gram matrix seeds alternating least-squares refinement
/// (v <- X'u / |X'u|, u <- Xv / |Xv|), which restores full accuracy in the
/// singular vectors lost by squaring.
template <typename Derived>
SingularTriple<typename Derived::Scalar> leading_singular_triple(const Eigen::MatrixBase<Derived>& xin,
                                                                 int refinement_steps = 200) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> x = xin;
  const Eigen::Index m = x.rows(), n = x.cols();
  require(m >= 1 && n >= 1, "leading_singular_triple: empty matrix");
  SingularTriple<Scalar> t;
  if (x.isZero(Scalar(0))) {
    t.u = Vector<Scalar>::Unit(m, 0);
    t.v = Vector<Scalar>::Unit(n, 0);
    return t;
  }

  Vector<Scalar> v;
  if (n <= m) {
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(x.transpose() * x);
    v = eig.eigenvectors().col(n - 1);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(x * x.transpose());
    Vector<Scalar> u0 = eig.eigenvectors().col(m - 1);
    v = x.transpose() * u0;
    v.normalize();
  }
  Vector<Scalar> u = x * v;
  Scalar s = u.norm();
  u /= s;
  for (int it = 0; it < refinement_steps; ++it) {
    Vector<Scalar> v_new = x.transpose() * u;
    v_new.normalize();
    Vector<Scalar> u_new = x * v_new;
    const Scalar s_new = u_new.norm();
    u_new /= s_new;
    const Scalar change = (v_new - v).norm() + (u_new - u).norm();
    u = std::move(u_new);
    v = std::move(v_new);
    s = s_new;
    if (change <= Scalar(16) * Eigen::NumTraits<Scalar>::epsilon()) break;
  }
  apply_sign_convention(u, v);
  t.s = s;
  t.u = std::move(u);
  t.v = std::move(v);
  return t;
}

/// All min(m, n) singular values in nonincreasing order, from the spectrum of
/// the smaller Gram matrix.
template <typename Derived>
Vector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> gram =
      x.cols() <= x.rows() ? Matrix<Scalar>(x.transpose() * x) : Matrix<Scalar>(x * x.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
  Vector<Scalar> ev = eig.eigenvalues().reverse();
  return ev.cwiseMax(Scalar(0)).cwiseSqrt();
}

}  // namespace robrsvd
