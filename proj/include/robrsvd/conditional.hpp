#pragma once

#include "robrsvd/huber.hpp"
#include "robrsvd/penalty.hpp"

#include <string>
#include <utility>

namespace robrsvd {

/// The penalized weighted least-squares problem for one side of the rank-one
/// fit with the other side held fixed. Oriented so that the free vector is
/// indexed by the columns of `weights`; the u-step passes transposes.
///
/// With U = blockdiag(u, ..., u) and W = diag(Svec(weights)) the normal
/// equations are (U'WU + 2 Omega_{v|u}) v = U'WY. U'WU is diagonal with entries
/// a_j = sum_i u_i^2 w_ij, so nothing of size mn is ever formed.
template <typename Scalar = double>
class ConditionalSystem {
 public:
  ConditionalSystem(const Matrix<Scalar>& weights, const Vector<Scalar>& fixed,
                    const TwoWayPenaltySpec<Scalar>& spec, std::string axis = "column")
      : axis_(std::move(axis)) {
    require(fixed.size() == weights.rows(),
            "conditional system: fixed vector length does not match weight matrix");
    require(fixed.squaredNorm() > Scalar(0), "conditional system: fixed vector must be nonzero");
    spec.validate(weights.rows(), weights.cols());
    gram_ = (weights.array().colwise() * fixed.array().square()).colwise().sum().transpose();
    penalty_ = conditional_penalty_v(fixed, spec);
    Matrix<Scalar> system = Scalar(2) * penalty_;
    system.diagonal() += gram_;
    chol_.compute(system);
    if (chol_.info() != Eigen::Success) {
      for (Eigen::Index j = 0; j < gram_.size(); ++j)
        if (gram_[j] == Scalar(0))
          throw NumericalError("singular update system: " + axis_ + " " + std::to_string(j) +
                               " has zero total weight and no penalty coupling");
      throw NumericalError("singular update system: penalized normal matrix is not positive definite");
    }
  }

  Eigen::Index size() const { return gram_.size(); }

  /// Diagonal of U'WU.
  const Vector<Scalar>& gram() const { return gram_; }

  /// Omega_{v|u}.
  const Matrix<Scalar>& penalty() const { return penalty_; }

  /// (U'WU + 2 Omega_{v|u})^{-1} rhs.
  Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
    require(rhs.size() == size(), "conditional system: right-hand side has the wrong length");
    return chol_.solve(rhs);
  }

  /// (U'WU)^{-1} rhs, the update with no regularization.
  Vector<Scalar> unregularized(const Vector<Scalar>& rhs) const {
    require(rhs.size() == size(), "conditional system: right-hand side has the wrong length");
    for (Eigen::Index j = 0; j < gram_.size(); ++j)
      if (gram_[j] == Scalar(0))
        throw NumericalError("unregularized update undefined: " + axis_ + " " + std::to_string(j) +
                             " has zero total weight");
    return rhs.cwiseQuotient(gram_);
  }

  /// Regularized minus unregularized update, -(M^{-1} 2 Omega) (U'WU)^{-1} rhs,
  /// formed without subtracting two nearly equal solutions.
  Vector<Scalar> shrinkage(const Vector<Scalar>& rhs) const {
    const Vector<Scalar> raw = unregularized(rhs);
    return -chol_.solve(Scalar(2) * (penalty_ * raw));
  }

  /// size() - tr(H) = tr(M^{-1} 2 Omega_{v|u}).
  Scalar hat_complement() const {
    if (penalty_.isZero(Scalar(0))) return Scalar(0);
    return chol_.solve(Scalar(2) * penalty_).trace();
  }

  /// tr(H) with H = U M^{-1} U'W; equals tr(M^{-1} U'WU). Summed directly
  /// rather than as size() - hat_complement(), which cancels for heavy smoothing.
  Scalar hat_trace() const {
    const Matrix<Scalar> inverse = chol_.solve(Matrix<Scalar>::Identity(size(), size()));
    return inverse.diagonal().dot(gram_);
  }

 private:
  std::string axis_;
  Vector<Scalar> gram_;
  Matrix<Scalar> penalty_;
  Eigen::LLT<Matrix<Scalar>> chol_;
};

/// U'WY: entries sum_i u_i w_ij x_ij.
template <typename Scalar, typename DerivedX, typename DerivedW>
Vector<Scalar> weighted_rhs(const Eigen::MatrixBase<DerivedX>& data,
                            const Eigen::MatrixBase<DerivedW>& weights, const Vector<Scalar>& fixed) {
  return (data.cwiseProduct(weights)).transpose() * fixed;
}

template <typename Scalar>
ConditionalSystem<Scalar> v_system(const Vector<Scalar>& u, const WeightMatrix<Scalar>& w,
                                   const TwoWayPenaltySpec<Scalar>& spec) {
  return ConditionalSystem<Scalar>(w.weights, u, spec, "column");
}

template <typename Scalar>
ConditionalSystem<Scalar> u_system(const Vector<Scalar>& v, const WeightMatrix<Scalar>& w,
                                   const TwoWayPenaltySpec<Scalar>& spec) {
  return ConditionalSystem<Scalar>(w.weights.transpose(), v, spec.transposed(), "row");
}

inline void check_weights_shape(Eigen::Index rows, Eigen::Index cols, Eigen::Index wr, Eigen::Index wc) {
  require(rows == wr && cols == wc, "weight matrix dimensions do not match the data");
}

/// v-hat = (U'WU + 2 Omega_{v|u})^{-1} U'WY.
template <typename Scalar>
Vector<Scalar> update_v_given_u(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& u,
                                const WeightMatrix<Scalar>& w, const TwoWayPenaltySpec<Scalar>& spec) {
  check_weights_shape(x.rows(), x.cols(), w.rows(), w.cols());
  require(u.size() == x.rows(), "update_v_given_u: u length does not match row count");
  return v_system(u, w, spec).solve(weighted_rhs(x.values(), w.weights, u));
}

/// u-hat = (V'W*V + 2 Omega_{u|v})^{-1} V'W*Y*.
template <typename Scalar>
Vector<Scalar> update_u_given_v(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& v,
                                const WeightMatrix<Scalar>& w, const TwoWayPenaltySpec<Scalar>& spec) {
  check_weights_shape(x.rows(), x.cols(), w.rows(), w.cols());
  require(v.size() == x.cols(), "update_u_given_v: v length does not match column count");
  return u_system(v, w, spec).solve(
      weighted_rhs(x.values().transpose(), w.weights.transpose(), v));
}

template <typename Scalar>
Scalar hat_trace_v(const Vector<Scalar>& u, const WeightMatrix<Scalar>& w,
                   const TwoWayPenaltySpec<Scalar>& spec) {
  return v_system(u, w, spec).hat_trace();
}

template <typename Scalar>
Scalar hat_trace_u(const Vector<Scalar>& v, const WeightMatrix<Scalar>& w,
                   const TwoWayPenaltySpec<Scalar>& spec) {
  return u_system(v, w, spec).hat_trace();
}

}  // namespace robrsvd
