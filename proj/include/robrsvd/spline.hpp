#pragma once

#include "robrsvd/penalty.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace robrsvd {

/// Natural cubic spline in value / second-derivative form.
template <typename Scalar = double>
class SplineFunction {
 public:
  struct Evaluation {
    Scalar value;
    bool extrapolated;
  };

  SplineFunction(Vector<Scalar> knots, Vector<Scalar> values, Vector<Scalar> second_derivatives)
      : knots_(std::move(knots)), values_(std::move(values)), gamma_(std::move(second_derivatives)) {}

  const Vector<Scalar>& knots() const { return knots_; }
  const Vector<Scalar>& values() const { return values_; }
  const Vector<Scalar>& second_derivatives() const { return gamma_; }
  Scalar domain_begin() const { return knots_[0]; }
  Scalar domain_end() const { return knots_[knots_.size() - 1]; }

  /// Value at t; linear continuation outside the knot range, flagged.
  Evaluation evaluate(Scalar t) const {
    const Eigen::Index k = knots_.size();
    if (t < domain_begin()) {
      return {values_[0] - (domain_begin() - t) * slope_at_begin(), true};
    }
    if (t > domain_end()) {
      return {values_[k - 1] + (t - domain_end()) * slope_at_end(), true};
    }
    const Eigen::Index i = interval(t);
    const Scalar h = knots_[i + 1] - knots_[i];
    const Scalar a = t - knots_[i], b = knots_[i + 1] - t;
    const Scalar linear = (a * values_[i + 1] + b * values_[i]) / h;
    const Scalar bend = a * b * ((Scalar(1) + a / h) * gamma_[i + 1] + (Scalar(1) + b / h) * gamma_[i]) / Scalar(6);
    return {linear - bend, false};
  }

  Scalar operator()(Scalar t) const { return evaluate(t).value; }

  /// g''(t); zero outside the knot range.
  Scalar second_derivative(Scalar t) const {
    if (t < domain_begin() || t > domain_end()) return Scalar(0);
    const Eigen::Index i = interval(t);
    const Scalar h = knots_[i + 1] - knots_[i];
    return ((t - knots_[i]) * gamma_[i + 1] + (knots_[i + 1] - t) * gamma_[i]) / h;
  }

  /// Integral of g''^2 over the knot range (exact; g'' is piecewise linear).
  Scalar roughness() const {
    Scalar total = 0;
    for (Eigen::Index i = 0; i + 1 < knots_.size(); ++i) {
      const Scalar h = knots_[i + 1] - knots_[i];
      const Scalar a = gamma_[i], b = gamma_[i + 1];
      total += h * (a * a + a * b + b * b) / Scalar(3);
    }
    return total;
  }

 private:
  Eigen::Index interval(Scalar t) const {
    const Scalar* begin = knots_.data();
    const Scalar* end = begin + knots_.size();
    Eigen::Index i = static_cast<Eigen::Index>(std::upper_bound(begin, end, t) - begin) - 1;
    return std::clamp<Eigen::Index>(i, 0, knots_.size() - 2);
  }
  Scalar slope_at_begin() const {
    const Scalar h = knots_[1] - knots_[0];
    return (values_[1] - values_[0]) / h - h * gamma_[1] / Scalar(6);
  }
  Scalar slope_at_end() const {
    const Eigen::Index k = knots_.size();
    const Scalar h = knots_[k - 1] - knots_[k - 2];
    return (values_[k - 1] - values_[k - 2]) / h + h * gamma_[k - 2] / Scalar(6);
  }

  Vector<Scalar> knots_;
  Vector<Scalar> values_;
  Vector<Scalar> gamma_;
};

/// Natural cubic spline interpolant of (grid, values): the interpolant with
/// the smallest integrated squared second derivative, values' Omega values.
template <typename Scalar>
SplineFunction<Scalar> interpolate(const Vector<Scalar>& values, const Vector<Scalar>& grid) {
  const Eigen::Index k = grid.size();
  require(k >= 3, "spline interpolation needs at least 3 knots");
  require(values.size() == k, "spline values and knots differ in length");
  require(strictly_increasing(grid), "spline knots must be strictly increasing (no duplicates)");
  Matrix<Scalar> q, r;
  detail::spline_band_factors(grid, q, r);
  Vector<Scalar> gamma = Vector<Scalar>::Zero(k);
  gamma.segment(1, k - 2) = Eigen::LLT<Matrix<Scalar>>(r).solve(q.transpose() * values);
  return SplineFunction<Scalar>(grid, values, std::move(gamma));
}

/// `points` equally spaced evaluations across the knot range as CSV "t,value".
template <typename Scalar>
void write_spline_csv(std::ostream& out, const SplineFunction<Scalar>& f, int points = 201,
                      const char* value_name = "value") {
  require(points >= 2, "need at least 2 evaluation points");
  char buf[96];
  out << "t," << value_name << '\n';
  for (int p = 0; p < points; ++p) {
    const Scalar t = p + 1 == points
                         ? f.domain_end()
                         : f.domain_begin() + (f.domain_end() - f.domain_begin()) * Scalar(p) / Scalar(points - 1);
    std::snprintf(buf, sizeof buf, "%.16e,%.16e\n", static_cast<double>(t), static_cast<double>(f(t)));
    out << buf;
  }
}

}  // namespace robrsvd
