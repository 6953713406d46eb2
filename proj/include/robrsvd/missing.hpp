#pragma once

#include "robrsvd/rank_one.hpp"

#include <utility>

namespace robrsvd {

enum class ImputationInit { row_mean, column_mean };

template <typename Scalar = double>
struct ImputationOptions {
  ImputationInit init = ImputationInit::row_mean;
  /// Stop once the largest change of an imputed cell is below
  /// relative_tolerance times the range of the observed values.
  Scalar relative_tolerance = Scalar(1e-6);
  int max_rounds = 50;
};

template <typename Scalar = double>
struct ImputationState {
  Matrix<Scalar> filled;
  int round = 0;
  Scalar last_change = 0;
  bool converged = true;
};

/// Initial fill of masked cells with the mean of the observed cells in the
/// same row (or column).
template <typename Scalar>
Matrix<Scalar> initial_fill(const ObservedMatrix<Scalar>& x, ImputationInit init) {
  Matrix<Scalar> filled = x.values();
  const bool by_row = init == ImputationInit::row_mean;
  const Eigen::Index outer = by_row ? x.rows() : x.cols();
  const Eigen::Index inner = by_row ? x.cols() : x.rows();
  for (Eigen::Index a = 0; a < outer; ++a) {
    Scalar sum = 0;
    Eigen::Index count = 0;
    for (Eigen::Index b = 0; b < inner; ++b) {
      const Eigen::Index i = by_row ? a : b, j = by_row ? b : a;
      if (x.observed(i, j)) {
        sum += x.values()(i, j);
        ++count;
      }
    }
    if (count == 0)
      throw ContractViolation(std::string(by_row ? "row " : "column ") + std::to_string(a) +
                              " has no observed cells");
    const Scalar mean = sum / Scalar(count);
    for (Eigen::Index b = 0; b < inner; ++b) {
      const Eigen::Index i = by_row ? a : b, j = by_row ? b : a;
      if (!x.observed(i, j)) filled(i, j) = mean;
    }
  }
  return filled;
}

/// Rank-one fit on a matrix with missing cells by iterative imputation: each
/// round fits the filled matrix and refills the missing cells with s u_i v_j.
/// The robust scale is estimated once on the initial fill and held fixed, and
/// rounds after the first start from the previous pair, so the objective over
/// observed cells cannot increase from round to round at fixed penalties.
template <typename Scalar>
std::pair<ComponentPair<Scalar>, ImputationState<Scalar>> fit_with_missing(
    const ObservedMatrix<Scalar>& x, Method method, const RobustLossSpec<Scalar>& loss,
    const FitOptions<Scalar>& opts = {}, const ImputationOptions<Scalar>& iopts = {}) {
  ImputationState<Scalar> state;
  if (x.complete()) {
    state.filled = x.values();
    return {fit_rank_one(x, method, loss, opts), std::move(state)};
  }
  require(iopts.max_rounds >= 1, "max_rounds must be at least 1");
  detail::require_observed_rows_and_columns(x);

  Scalar lo = std::numeric_limits<Scalar>::infinity(), hi = -lo;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (x.observed(i, j)) {
        lo = std::min(lo, x.values()(i, j));
        hi = std::max(hi, x.values()(i, j));
      }
  const Scalar range = hi > lo ? hi - lo : Scalar(1);
  const Scalar tol = iopts.relative_tolerance * range;

  state.filled = initial_fill(x, iopts.init);
  const Mask all = Mask::Constant(x.rows(), x.cols(), true);

  RobustLossSpec<Scalar> round_loss = loss;
  if (method == Method::robrsvd && !loss.is_squared() &&
      loss.sigma_source == SigmaSource::mad_from_svd_residuals) {
    const ObservedMatrix<Scalar> first(state.filled, all, x.row_grid(), x.col_grid());
    const SingularTriple<Scalar> prelim = leading_singular_triple(state.filled);
    round_loss.sigma = estimate_scale_mad(residual(first, prelim.s, prelim.u, prelim.v));
    round_loss.sigma_source = SigmaSource::fixed;
  }

  FitOptions<Scalar> round_opts = opts;
  ComponentPair<Scalar> pair;
  state.converged = false;
  for (int round = 1; round <= iopts.max_rounds; ++round) {
    const ObservedMatrix<Scalar> complete(state.filled, all, x.row_grid(), x.col_grid());
    pair = fit_rank_one(complete, method, round_loss, round_opts);
    Scalar change = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        if (!x.observed(i, j)) {
          const Scalar refill = pair.s * pair.u[i] * pair.v[j];
          change = std::max(change, std::abs(refill - state.filled(i, j)));
          state.filled(i, j) = refill;
        }
    state.round = round;
    state.last_change = change;
    round_opts.initial = pair.triple();
    if (change <= tol) {
      state.converged = true;
      break;
    }
  }
  // Report the objective over observed cells only.
  if (method != Method::svd) {
    const TwoWayPenaltySpec<Scalar> spec =
        TwoWayPenaltySpec<Scalar>::from_grids(x.row_grid(), x.col_grid(), opts.penalty)
            .with_lambdas(pair.lambda_u, pair.lambda_v);
    RobustLossSpec<Scalar> report = round_loss;
    report.theta = pair.theta;
    report.sigma = pair.sigma;
    pair.final_objective = rank_one_objective(x, pair.s, pair.u, pair.v, report, spec);
  } else {
    pair.final_objective = residual(x, pair.s, pair.u, pair.v).residuals.squaredNorm();
  }
  return {std::move(pair), std::move(state)};
}

}  // namespace robrsvd
