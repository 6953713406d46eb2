#pragma once

#include "robrsvd/conditional.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <type_traits>
#include <vector>

namespace robrsvd {

/// Strictly increasing, finite, nonnegative penalty parameter values.
template <typename Scalar = double>
class LambdaGrid {
 public:
  LambdaGrid() : LambdaGrid(log_spaced(Scalar(1e-6), Scalar(1e4), 20)) {}

  explicit LambdaGrid(std::vector<Scalar> values) : values_(std::move(values)) {
    require(!values_.empty(), "lambda grid must be nonempty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      require(std::isfinite(static_cast<double>(values_[i])) && values_[i] >= Scalar(0),
              "lambda grid values must be finite and nonnegative");
      require(i == 0 || values_[i] > values_[i - 1], "lambda grid must be strictly increasing");
    }
  }

  /// count points log-spaced over [lo, hi].
  static LambdaGrid log_spaced(Scalar lo, Scalar hi, int count) {
    require(lo > Scalar(0) && hi >= lo && count >= 1, "invalid log-spaced lambda grid bounds");
    if (count == 1) return LambdaGrid(std::vector<Scalar>{lo});
    std::vector<Scalar> values(static_cast<std::size_t>(count));
    const Scalar a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < count; ++i)
      values[static_cast<std::size_t>(i)] = std::pow(Scalar(10), a + (b - a) * Scalar(i) / Scalar(count - 1));
    values.front() = lo;
    values.back() = hi;
    return LambdaGrid(std::move(values));
  }

  static LambdaGrid single(Scalar value) { return LambdaGrid(std::vector<Scalar>{value}); }

  const std::vector<Scalar>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Scalar operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<Scalar> values_;
};

template <typename Scalar = double>
struct GcvRecord {
  Scalar lambda;
  Scalar gcv;
  Scalar hat_trace;
  bool chosen = false;
};

template <typename Scalar = double>
struct GcvTrace {
  std::vector<GcvRecord<Scalar>> records;

  const GcvRecord<Scalar>& chosen() const {
    for (const auto& r : records)
      if (r.chosen) return r;
    throw NumericalError("GCV trace has no chosen record");
  }
};

/// One evaluation of a GCV criterion.
template <typename Scalar = double>
struct GcvPoint {
  Scalar score;
  Scalar hat_trace;
};

/// (|fit - unregularized fit|^2 / n) / (1 - tr(H)/n)^2 for a prepared system.
/// The score is +inf when tr(H)/n is numerically 1 (no effective smoothing).
template <typename Scalar>
GcvPoint<Scalar> gcv_score(const ConditionalSystem<Scalar>& system, const Vector<Scalar>& rhs) {
  const Scalar n = Scalar(system.size());
  const Scalar complement = system.hat_complement();
  const Scalar hat = system.hat_trace();
  const Scalar slack = complement / n;
  if (!(slack > Scalar(1e-14)) || !std::isfinite(static_cast<double>(slack)))
    return {std::numeric_limits<Scalar>::infinity(), hat};
  const Scalar numerator = system.shrinkage(rhs).squaredNorm() / n;
  return {numerator / (slack * slack), hat};
}

/// GCV(lambda_v | lambda_u) at the penalty parameters carried by `spec`.
template <typename Scalar>
GcvPoint<Scalar> gcv_v(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& u,
                       const WeightMatrix<Scalar>& w, const TwoWayPenaltySpec<Scalar>& spec) {
  check_weights_shape(x.rows(), x.cols(), w.rows(), w.cols());
  return gcv_score(v_system(u, w, spec), weighted_rhs(x.values(), w.weights, u));
}

/// GCV(lambda_u | lambda_v).
template <typename Scalar>
GcvPoint<Scalar> gcv_u(const ObservedMatrix<Scalar>& x, const Vector<Scalar>& v,
                       const WeightMatrix<Scalar>& w, const TwoWayPenaltySpec<Scalar>& spec) {
  check_weights_shape(x.rows(), x.cols(), w.rows(), w.cols());
  return gcv_score(u_system(v, w, spec),
                   weighted_rhs(x.values().transpose(), w.weights.transpose(), v));
}

/// Grid search: evaluates `score` at every grid point and returns the argmin
/// (ties go to the smaller lambda) together with the full trace. `score` may
/// return either a plain number or a GcvPoint.
template <typename Scalar, typename ScoreFn>
std::pair<Scalar, GcvTrace<Scalar>> select_lambda(const LambdaGrid<Scalar>& grid, ScoreFn&& score) {
  GcvTrace<Scalar> trace;
  trace.records.reserve(grid.size());
  std::ptrdiff_t best = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Scalar lambda = grid[i];
    GcvRecord<Scalar> rec{lambda, std::numeric_limits<Scalar>::quiet_NaN(),
                          std::numeric_limits<Scalar>::quiet_NaN(), false};
    using Result = std::decay_t<decltype(score(lambda))>;
    if constexpr (std::is_same_v<Result, GcvPoint<Scalar>>) {
      const GcvPoint<Scalar> p = score(lambda);
      rec.gcv = p.score;
      rec.hat_trace = p.hat_trace;
    } else {
      rec.gcv = static_cast<Scalar>(score(lambda));
    }
    if (std::isfinite(static_cast<double>(rec.gcv)) &&
        (best < 0 || rec.gcv < trace.records[static_cast<std::size_t>(best)].gcv))
      best = static_cast<std::ptrdiff_t>(i);
    trace.records.push_back(rec);
  }
  if (best < 0) throw NumericalError("GCV degenerate on grid");
  trace.records[static_cast<std::size_t>(best)].chosen = true;
  return {grid[static_cast<std::size_t>(best)], std::move(trace)};
}

/// CSV export with columns lambda, gcv, hat_trace, chosen.
template <typename Scalar>
void write_gcv_trace_csv(std::ostream& out, const GcvTrace<Scalar>& trace) {
  auto fmt = [](Scalar x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", static_cast<double>(x));
    return std::string(buf);
  };
  out << "lambda,gcv,hat_trace,chosen\n";
  for (const auto& r : trace.records)
    out << fmt(r.lambda) << ',' << fmt(r.gcv) << ',' << fmt(r.hat_trace) << ','
        << (r.chosen ? 1 : 0) << '\n';
}

}  // namespace robrsvd
