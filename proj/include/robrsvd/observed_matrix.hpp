#pragma once

#include "robrsvd/common.hpp"

#include <string>
#include <utility>

namespace robrsvd {

/// A two-way functional data matrix: values sampled on a row grid (domain Y)
/// and a column grid (domain Z), with an observation mask. Masked cells store
/// a placeholder 0 and are never read by loss or weight computations.
template <typename Scalar = double>
class ObservedMatrix {
 public:
  ObservedMatrix() = default;

  /// Complete matrix on equally spaced unit grids.
  explicit ObservedMatrix(Matrix<Scalar> values)
      : ObservedMatrix(values, Mask::Constant(values.rows(), values.cols(), true)) {}

  ObservedMatrix(Matrix<Scalar> values, Mask mask)
      : ObservedMatrix(values, mask, unit_grid<Scalar>(values.rows()),
                       unit_grid<Scalar>(values.cols())) {}

  ObservedMatrix(Matrix<Scalar> values, Mask mask, Vector<Scalar> row_grid,
                 Vector<Scalar> col_grid)
      : values_(std::move(values)),
        mask_(std::move(mask)),
        row_grid_(std::move(row_grid)),
        col_grid_(std::move(col_grid)) {
    require(values_.rows() >= 2 && values_.cols() >= 2,
            "observed matrix needs at least 2 rows and 2 columns");
    require(mask_.rows() == values_.rows() && mask_.cols() == values_.cols(),
            "mask dimensions do not match values");
    require(row_grid_.size() == values_.rows(), "row grid length does not match row count");
    require(col_grid_.size() == values_.cols(), "column grid length does not match column count");
    require(strictly_increasing(row_grid_), "row grid must be strictly increasing");
    require(strictly_increasing(col_grid_), "column grid must be strictly increasing");
    for (Eigen::Index j = 0; j < values_.cols(); ++j)
      for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        if (!mask_(i, j))
          values_(i, j) = Scalar(0);
        else
          require(std::isfinite(static_cast<double>(values_(i, j))),
                  "observed cell (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") is not finite");
      }
  }

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  const Matrix<Scalar>& values() const { return values_; }
  const Mask& mask() const { return mask_; }
  const Vector<Scalar>& row_grid() const { return row_grid_; }
  const Vector<Scalar>& col_grid() const { return col_grid_; }

  bool observed(Eigen::Index i, Eigen::Index j) const { return mask_(i, j); }
  Eigen::Index missing_count() const { return mask_.size() - mask_.count(); }
  bool complete() const { return mask_.all(); }

  /// Same grids and mask, new values (masked cells are reset to 0).
  ObservedMatrix with_values(Matrix<Scalar> values) const {
    return ObservedMatrix(std::move(values), mask_, row_grid_, col_grid_);
  }

  /// Same values and grids, new mask.
  ObservedMatrix with_mask(Mask mask) const {
    return ObservedMatrix(values_, std::move(mask), row_grid_, col_grid_);
  }

  /// Same values and mask, new grids.
  ObservedMatrix with_grids(Vector<Scalar> row_grid, Vector<Scalar> col_grid) const {
    return ObservedMatrix(values_, mask_, std::move(row_grid), std::move(col_grid));
  }

 private:
  Matrix<Scalar> values_;
  Mask mask_;
  Vector<Scalar> row_grid_;
  Vector<Scalar> col_grid_;
};

/// Residuals x_ij - s u_i v_j; masked cells hold 0 and are flagged excluded.
template <typename Scalar = double>
struct ResidualMatrix {
  Matrix<Scalar> residuals;
  Mask mask;

  Eigen::Index rows() const { return residuals.rows(); }
  Eigen::Index cols() const { return residuals.cols(); }
};

/// IRLS weights w_ij = W(r_ij); zero on masked cells.
template <typename Scalar = double>
struct WeightMatrix {
  Matrix<Scalar> weights;

  Eigen::Index rows() const { return weights.rows(); }
  Eigen::Index cols() const { return weights.cols(); }
};

template <typename Scalar, typename DerivedU, typename DerivedV>
ResidualMatrix<Scalar> residual(const ObservedMatrix<Scalar>& x, Scalar s,
                                const Eigen::MatrixBase<DerivedU>& u,
                                const Eigen::MatrixBase<DerivedV>& v) {
  require(u.size() == x.rows() && v.size() == x.cols(),
          "residual: vector lengths (" + std::to_string(u.size()) + ", " +
              std::to_string(v.size()) + ") do not match matrix " + std::to_string(x.rows()) +
              "x" + std::to_string(x.cols()));
  require(std::isfinite(static_cast<double>(s)), "residual: singular value must be finite");
  ResidualMatrix<Scalar> r{Matrix<Scalar>(x.rows(), x.cols()), x.mask()};
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      r.residuals(i, j) = x.observed(i, j) ? x.values()(i, j) - s * u[i] * v[j] : Scalar(0);
  return r;
}

/// Residual as a new ObservedMatrix (same grids and mask); used for deflation.
template <typename Scalar, typename DerivedU, typename DerivedV>
ObservedMatrix<Scalar> deflate(const ObservedMatrix<Scalar>& x, Scalar s,
                               const Eigen::MatrixBase<DerivedU>& u,
                               const Eigen::MatrixBase<DerivedV>& v) {
  return x.with_values(residual(x, s, u, v).residuals);
}

}  // namespace robrsvd
