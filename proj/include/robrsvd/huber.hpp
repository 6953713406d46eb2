#pragma once

#include "robrsvd/observed_matrix.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace robrsvd {

/// Default Huber threshold (95% efficiency under Gaussian errors).
inline constexpr double kDefaultHuberTheta = 1.345;

/// MAD normalizing constant.
inline constexpr double kMadNormalizer = 0.675;

enum class SigmaSource { fixed, mad_from_svd_residuals };

template <typename Scalar = double>
struct RobustLossSpec {
  /// +infinity turns the loss into the squared loss (weights identically 2).
  Scalar theta = Scalar(kDefaultHuberTheta);
  /// Used when sigma_source == fixed; otherwise overwritten by the fit.
  Scalar sigma = Scalar(1);
  SigmaSource sigma_source = SigmaSource::mad_from_svd_residuals;

  static RobustLossSpec squared() {
    return {std::numeric_limits<Scalar>::infinity(), Scalar(1), SigmaSource::fixed};
  }
  bool is_squared() const { return std::isinf(static_cast<double>(theta)); }
};

/// Huber's rho: x^2 inside [-theta, theta], 2 theta |x| - theta^2 outside.
template <typename Scalar>
Scalar huber_rho(Scalar x, Scalar theta) {
  require(theta > Scalar(0), "huber_rho: theta must be positive");
  const Scalar a = std::abs(x);
  return a <= theta ? x * x : Scalar(2) * theta * a - theta * theta;
}

/// psi = rho'.
template <typename Scalar>
Scalar huber_psi(Scalar x, Scalar theta) {
  require(theta > Scalar(0), "huber_psi: theta must be positive");
  const Scalar a = std::abs(x);
  if (a <= theta) return Scalar(2) * x;
  return x > Scalar(0) ? Scalar(2) * theta : Scalar(-2) * theta;
}

/// IRLS weight psi(x)/x, with the limit value 2 at x = 0.
template <typename Scalar>
Scalar huber_weight(Scalar x, Scalar theta) {
  require(theta > Scalar(0), "huber_weight: theta must be positive");
  const Scalar a = std::abs(x);
  return a <= theta ? Scalar(2) : Scalar(2) * theta / a;
}

/// Median with the mean-of-central-pair convention for even counts.
template <typename Scalar>
Scalar median(std::vector<Scalar> values) {
  require(!values.empty(), "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const Scalar upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const Scalar lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / Scalar(2);
}

/// Normalized MAD over observed, nonzero residuals: median|r_ij| / 0.675.
template <typename Scalar>
Scalar estimate_scale_mad(const ResidualMatrix<Scalar>& r) {
  std::vector<Scalar> magnitudes;
  magnitudes.reserve(static_cast<std::size_t>(r.residuals.size()));
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      if (r.mask(i, j) && r.residuals(i, j) != Scalar(0))
        magnitudes.push_back(std::abs(r.residuals(i, j)));
  if (magnitudes.empty()) throw NumericalError("degenerate residuals; fix sigma manually");
  return median(std::move(magnitudes)) / Scalar(kMadNormalizer);
}

/// Weights W((x_ij - u_i v_j) / sigma) on observed cells, 0 on masked cells.
template <typename Scalar, typename DerivedU, typename DerivedV>
WeightMatrix<Scalar> compute_weights(const ObservedMatrix<Scalar>& x,
                                     const Eigen::MatrixBase<DerivedU>& u,
                                     const Eigen::MatrixBase<DerivedV>& v,
                                     const RobustLossSpec<Scalar>& loss) {
  WeightMatrix<Scalar> w{Matrix<Scalar>(x.rows(), x.cols())};
  const bool squared = loss.is_squared();
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!x.observed(i, j)) {
        w.weights(i, j) = Scalar(0);
      } else if (squared) {
        w.weights(i, j) = Scalar(2);
      } else {
        const Scalar r = (x.values()(i, j) - u[i] * v[j]) / loss.sigma;
        w.weights(i, j) = huber_weight(r, loss.theta);
      }
    }
  return w;
}

/// Data-fit term sigma^2 * sum rho((x_ij - s u_i v_j) / sigma) over observed
/// cells. The sigma^2 factor keeps the quadratic branch equal to the plain
/// squared error, so theta = +inf gives the least-squares criterion exactly.
template <typename Scalar, typename DerivedU, typename DerivedV>
Scalar robust_loss(const ObservedMatrix<Scalar>& x, Scalar s,
                   const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                   const RobustLossSpec<Scalar>& loss) {
  Scalar total = 0;
  const bool squared = loss.is_squared();
  const Scalar sigma2 = loss.sigma * loss.sigma;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!x.observed(i, j)) continue;
      const Scalar r = x.values()(i, j) - s * u[i] * v[j];
      total += squared ? r * r : sigma2 * huber_rho(r / loss.sigma, loss.theta);
    }
  return total;
}

}  // namespace robrsvd
