#pragma once

#include "robrsvd/gcv.hpp"
#include "robrsvd/svd.hpp"

#include <optional>
#include <string>
#include <vector>

namespace robrsvd {

template <typename Scalar = double>
struct FitOptions {
  LambdaGrid<Scalar> lambda_u_grid;
  LambdaGrid<Scalar> lambda_v_grid;
  /// Stop when the relative change of the objective falls below this.
  Scalar tolerance = Scalar(1e-6);
  int max_iterations = 100;
  /// Penalty parameters are re-selected by GCV during the first
  /// freeze_lambda_after iterations and held fixed afterwards; 0 never freezes.
  int freeze_lambda_after = 5;
  PenaltyKind penalty = PenaltyKind::natural_spline;
  /// Starting pair; the leading plain-SVD pair when empty.
  std::optional<SingularTriple<Scalar>> initial;
};

/// One extracted rank-one term s u v' with fit diagnostics.
template <typename Scalar = double>
struct ComponentPair {
  Scalar s = 0;
  Vector<Scalar> u;
  Vector<Scalar> v;
  Scalar lambda_u = 0;
  Scalar lambda_v = 0;
  int iterations = 0;
  Scalar final_objective = 0;
  bool converged = false;

  Method method = Method::svd;
  /// Scale and threshold the robust loss used (theta = +inf for svd/rsvd).
  Scalar sigma = 1;
  Scalar theta = std::numeric_limits<Scalar>::infinity();
  /// True once penalty parameters stopped being re-selected.
  bool lambda_frozen = false;
  /// Objective at the starting pair, then after every half-step.
  std::vector<Scalar> objective_history;
  /// Most recent GCV grid searches (empty when the grid had one point).
  GcvTrace<Scalar> gcv_u;
  GcvTrace<Scalar> gcv_v;

  SingularTriple<Scalar> triple() const { return {s, u, v}; }
};

/// R(u, v): sigma^2 sum rho((x - s u v')/sigma) over observed cells plus the
/// two-way penalty of the fitted term.
template <typename Scalar>
Scalar rank_one_objective(const ObservedMatrix<Scalar>& x, Scalar s, const Vector<Scalar>& u,
                          const Vector<Scalar>& v, const RobustLossSpec<Scalar>& loss,
                          const TwoWayPenaltySpec<Scalar>& spec) {
  const Vector<Scalar> su = s * u;
  return robust_loss(x, s, u, v, loss) + two_way_penalty(su, v, spec);
}

namespace detail {

template <typename Scalar>
void require_observed_rows_and_columns(const ObservedMatrix<Scalar>& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (!x.mask().row(i).any())
      throw ContractViolation("row " + std::to_string(i) + " has no observed cells");
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    if (!x.mask().col(j).any())
      throw ContractViolation("column " + std::to_string(j) + " has no observed cells");
}

}  // namespace detail

/// v-half-step: v <- (U'WU + 2 Omega_{v|u})^{-1} U'WY with weights at the current fit.
template <typename Scalar>
Vector<Scalar> half_step_v(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& u,
                           const Vector<Scalar>& v, const RobustLossSpec<Scalar>& loss,
                           const TwoWayPenaltySpec<Scalar>& spec) {
  return update_v_given_u(x, u, compute_weights(x, u, v, loss), spec);
}

/// u-half-step, mirror of half_step_v.
template <typename Scalar>
Vector<Scalar> half_step_u(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& u,
                           const Vector<Scalar>& v, const RobustLossSpec<Scalar>& loss,
                           const TwoWayPenaltySpec<Scalar>& spec) {
  return update_u_given_v(x, v, compute_weights(x, u, v, loss), spec);
}

/// One complete IRLS iteration at fixed penalty parameters, starting from the
/// fit u v' (any scaling); returns the normalized pair and its constant.
template <typename Scalar>
SingularTriple<Scalar> irls_iteration(const ObservedMatrix<Scalar>& x, Vector<Scalar> u,
                                      const Vector<Scalar>& v0, const RobustLossSpec<Scalar>& loss,
                                      const TwoWayPenaltySpec<Scalar>& spec) {
  Vector<Scalar> v = half_step_v(x, u, v0, loss, spec);
  const Scalar c = v.norm();
  if (!(c > Scalar(0))) throw NumericalError("v update collapsed to zero");
  v /= c;
  u *= c;
  u = half_step_u(x, u, v, loss, spec);
  const Scalar s = u.norm();
  if (!(s > Scalar(0))) throw NumericalError("u update collapsed to zero");
  u /= s;
  return {s, std::move(u), std::move(v)};
}

/// Alternating IRLS with GCV-selected penalties. W is recomputed before each
/// half-step; a squared loss (theta = +inf) fixes W = 2 and gives the
/// regularized SVD.
template <typename Scalar>
ComponentPair<Scalar> fit_rank_one_penalized(const ObservedMatrix<Scalar>& x,
                                             RobustLossSpec<Scalar> loss,
                                             const FitOptions<Scalar>& opts, Method method) {
  require(x.rows() >= 3 && x.cols() >= 3, "penalized fits need at least 3 rows and 3 columns");
  require(opts.max_iterations >= 1, "max_iterations must be at least 1");
  require(opts.tolerance > Scalar(0), "tolerance must be positive");
  require(loss.theta > Scalar(0), "Huber threshold theta must be positive");
  detail::require_observed_rows_and_columns(x);

  const TwoWayPenaltySpec<Scalar> base = TwoWayPenaltySpec<Scalar>::from_grids(
      x.row_grid(), x.col_grid(), opts.penalty);

  SingularTriple<Scalar> start = opts.initial ? *opts.initial : leading_singular_triple(x.values());
  require(start.u.size() == x.rows() && start.v.size() == x.cols(),
          "initial pair does not match the matrix dimensions");
  if (!(start.s > Scalar(0))) throw NumericalError("matrix has no rank-one signal to fit");

  if (loss.is_squared()) {
    loss.sigma = Scalar(1);
  } else if (loss.sigma_source == SigmaSource::mad_from_svd_residuals) {
    const SingularTriple<Scalar> prelim =
        opts.initial ? leading_singular_triple(x.values()) : start;
    loss.sigma = estimate_scale_mad(residual(x, prelim.s, prelim.u, prelim.v));
  }
  require(loss.sigma > Scalar(0), "scale sigma must be positive");

  ComponentPair<Scalar> out;
  out.method = method;
  out.sigma = loss.sigma;
  out.theta = loss.theta;

  Vector<Scalar> u = start.u / start.u.norm();
  Vector<Scalar> v = start.v / start.v.norm();
  Scalar s = start.s * start.u.norm() * start.v.norm();
  Scalar lambda_u = opts.lambda_u_grid[0];
  Scalar lambda_v = opts.lambda_v_grid[0];
  const bool select_u = opts.lambda_u_grid.size() > 1;
  const bool select_v = opts.lambda_v_grid.size() > 1;

  Scalar previous = rank_one_objective(x, s, u, v, loss, base.with_lambdas(lambda_u, lambda_v));
  out.objective_history.push_back(previous);
  const Scalar floor = Scalar(1e-14) * x.values().squaredNorm();

  v *= s;  // the fit is carried as u v' between half-steps
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    const bool frozen = opts.freeze_lambda_after > 0 && iter > opts.freeze_lambda_after;
    out.lambda_frozen = frozen && (select_u || select_v);

    // v given u
    {
      const WeightMatrix<Scalar> w = compute_weights(x, u, v, loss);
      if (select_v && !frozen) {
        auto [chosen, trace] = select_lambda(opts.lambda_v_grid, [&](Scalar lv) {
          return gcv_v(x, u, w, base.with_lambdas(lambda_u, lv));
        });
        lambda_v = chosen;
        out.gcv_v = std::move(trace);
      }
      v = update_v_given_u(x, u, w, base.with_lambdas(lambda_u, lambda_v));
    }
    const Scalar cv = v.norm();
    if (!(cv > Scalar(0))) throw NumericalError("v update collapsed to zero");
    v /= cv;
    u *= cv;
    const TwoWayPenaltySpec<Scalar> mid_spec = base.with_lambdas(lambda_u, lambda_v);
    out.objective_history.push_back(rank_one_objective(x, Scalar(1), u, v, loss, mid_spec));

    // u given v
    {
      const WeightMatrix<Scalar> w = compute_weights(x, u, v, loss);
      if (select_u && !frozen) {
        auto [chosen, trace] = select_lambda(opts.lambda_u_grid, [&](Scalar lu) {
          return gcv_u(x, v, w, base.with_lambdas(lu, lambda_v));
        });
        lambda_u = chosen;
        out.gcv_u = std::move(trace);
      }
      u = update_u_given_v(x, v, w, base.with_lambdas(lambda_u, lambda_v));
    }
    s = u.norm();
    if (!(s > Scalar(0))) throw NumericalError("u update collapsed to zero");
    u /= s;

    const Scalar current = rank_one_objective(x, s, u, v, loss, base.with_lambdas(lambda_u, lambda_v));
    out.objective_history.push_back(current);
    out.iterations = iter;
    const bool done = std::abs(previous - current) <= opts.tolerance * std::max(std::abs(previous), floor);
    previous = current;
    v *= s;
    if (done) {
      out.converged = true;
      break;
    }
  }
  v /= s;

  apply_sign_convention(u, v);
  out.s = s;
  out.u = std::move(u);
  out.v = std::move(v);
  out.lambda_u = lambda_u;
  out.lambda_v = lambda_v;
  out.final_objective = previous;
  return out;
}

/// Robust regularized rank-one fit (Huber loss, two-way roughness penalty).
template <typename Scalar>
ComponentPair<Scalar> fit_rank_one_robrsvd(const ObservedMatrix<Scalar>& x,
                                           const RobustLossSpec<Scalar>& loss,
                                           const FitOptions<Scalar>& opts = {}) {
  return fit_rank_one_penalized(x, loss, opts, Method::robrsvd);
}

/// Regularized rank-one fit with squared loss.
template <typename Scalar>
ComponentPair<Scalar> fit_rank_one_rsvd(const ObservedMatrix<Scalar>& x,
                                        const FitOptions<Scalar>& opts = {}) {
  return fit_rank_one_penalized(x, RobustLossSpec<Scalar>::squared(), opts, Method::rsvd);
}

/// Best rank-one least-squares approximation (leading singular triple).
template <typename Scalar>
ComponentPair<Scalar> fit_rank_one_svd(const ObservedMatrix<Scalar>& x) {
  require(x.complete(), "plain SVD needs a complete (or pre-imputed) matrix");
  const SingularTriple<Scalar> t = leading_singular_triple(x.values());
  ComponentPair<Scalar> out;
  out.method = Method::svd;
  out.s = t.s;
  out.u = t.u;
  out.v = t.v;
  out.iterations = 1;
  out.converged = true;
  out.final_objective = (x.values() - t.s * t.u * t.v.transpose()).squaredNorm();
  out.objective_history.push_back(out.final_objective);
  return out;
}

template <typename Scalar>
ComponentPair<Scalar> fit_rank_one(const ObservedMatrix<Scalar>& x, Method method,
                                   const RobustLossSpec<Scalar>& loss, const FitOptions<Scalar>& opts = {}) {
  switch (method) {
    case Method::svd: return fit_rank_one_svd(x);
    case Method::rsvd: return fit_rank_one_rsvd(x, opts);
    case Method::robrsvd: return fit_rank_one_robrsvd(x, loss, opts);
  }
  throw ContractViolation("unknown method");
}

}  // namespace robrsvd
