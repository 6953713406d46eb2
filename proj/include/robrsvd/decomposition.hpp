#pragma once

#include "robrsvd/missing.hpp"

#include <vector>

namespace robrsvd {

template <typename Scalar = double>
struct Decomposition {
  /// Component k was fitted on the residual of components 0..k-1.
  std::vector<ComponentPair<Scalar>> components;
  /// One imputation record per component (round 0 when nothing was missing).
  std::vector<ImputationState<Scalar>> imputation;
  ResidualMatrix<Scalar> residual;
  Method method = Method::svd;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(components.size()); }

  /// Sum of s_k u_k v_k' over the first `rank` components (all when negative).
  Matrix<Scalar> reconstruction(Eigen::Index rank = -1) const {
    if (components.empty()) return {};
    const Eigen::Index r = rank < 0 ? this->rank() : std::min(rank, this->rank());
    Matrix<Scalar> out = Matrix<Scalar>::Zero(components.front().u.size(), components.front().v.size());
    for (Eigen::Index k = 0; k < r; ++k) {
      const auto& c = components[static_cast<std::size_t>(k)];
      out.noalias() += c.s * c.u * c.v.transpose();
    }
    return out;
  }

  /// Left (or right) singular vectors as matrix columns.
  Matrix<Scalar> left_vectors() const {
    Matrix<Scalar> out(components.front().u.size(), rank());
    for (Eigen::Index k = 0; k < rank(); ++k) out.col(k) = components[static_cast<std::size_t>(k)].u;
    return out;
  }
  Matrix<Scalar> right_vectors() const {
    Matrix<Scalar> out(components.front().v.size(), rank());
    for (Eigen::Index k = 0; k < rank(); ++k) out.col(k) = components[static_cast<std::size_t>(k)].v;
    return out;
  }
};

/// Sequential rank-r decomposition by deflation. Each component selects its
/// own penalties and (for robrsvd) its own robust scale; missing cells are
/// imputed per component from the running reconstruction.
template <typename Scalar>
Decomposition<Scalar> fit(const ObservedMatrix<Scalar>& x, Method method, Eigen::Index rank,
                          const RobustLossSpec<Scalar>& loss = {}, const FitOptions<Scalar>& opts = {},
                          const ImputationOptions<Scalar>& iopts = {}) {
  require(rank >= 1 && rank <= std::min(x.rows(), x.cols()),
          "rank must lie in [1, min(m, n)], got " + std::to_string(rank));
  Decomposition<Scalar> out;
  out.method = method;
  ObservedMatrix<Scalar> current = x;
  for (Eigen::Index k = 0; k < rank; ++k) {
    try {
      auto [pair, state] = fit_with_missing(current, method, loss, opts, iopts);
      current = deflate(current, pair.s, pair.u, pair.v);
      out.components.push_back(std::move(pair));
      out.imputation.push_back(std::move(state));
    } catch (const ContractViolation& e) {
      throw ContractViolation("component " + std::to_string(k + 1) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("component " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  out.residual = ResidualMatrix<Scalar>{current.values(), current.mask()};
  return out;
}

/// Observed values where available, the decomposition's reconstruction elsewhere.
template <typename Scalar>
Matrix<Scalar> impute(const ObservedMatrix<Scalar>& x, const Decomposition<Scalar>& d) {
  const Matrix<Scalar> rec = d.reconstruction();
  Matrix<Scalar> out = x.values();
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (!x.observed(i, j)) out(i, j) = rec(i, j);
  return out;
}

}  // namespace robrsvd
