#pragma once

#include <string>
#include <utility>
#include <vector>

namespace clw {

/// Default comparison tolerance for [0,1]-valued arithmetic. Distances on
/// the circle and ball are irrational, so invariant checks compare up to a
/// tolerance; num_tol() is the active value (CLI flag --tol overrides it).
inline constexpr double kTolDefault = 1e-9;

double num_tol();
void set_num_tol(double tol);

/// Truncated subtraction max(a - b, 0). Always returns +0.0, never -0.0.
inline double dot_minus(double a, double b) {
  double t = a - b;
  return t > 0.0 ? t : 0.0;
}

/// Truncated addition min(a + b, 1).
inline double trunc_add(double a, double b) {
  double t = a + b;
  return t < 1.0 ? t : 1.0;
}

/// Monotone piecewise-linear map [0,1] -> [0,1] given by breakpoints.
/// Evaluation interpolates linearly between breakpoints and is exact at them.
///
/// These functions serve two roles: moduli of uniform continuity attached to
/// signature symbols, and the increasing unary witnesses that stand in for
/// implications. Both roles need the `increasing` and `zero_at_zero` flags.
class PlFunc {
 public:
  using Point = std::pair<double, double>;

  /// Throws std::invalid_argument when the breakpoints are out of order,
  /// leave [0,1], do not span x = 0..1, or contradict the flags.
  explicit PlFunc(std::vector<Point> breakpoints, bool increasing = true,
                  bool zero_at_zero = true);

  static PlFunc identity();

  const std::vector<Point>& breakpoints() const { return pts_; }
  bool increasing() const { return increasing_; }
  bool zero_at_zero() const { return zero_at_zero_; }

  /// Linear interpolation; exact at breakpoints. Throws std::domain_error
  /// for x outside [0,1].
  double eval(double x) const;

  /// inf{eps in [0,1] : f(eps) > dist}, and 1 when no eps qualifies.
  /// For a modulus Delta this is the tightest output-discrepancy bound the
  /// modulus permits at input distance `dist`; solved exactly on the
  /// piecewise-linear segments.
  double threshold(double dist) const;

  /// Largest segment slope; Lipschitz constant of the map.
  double max_slope() const;

  /// True when f(x) > 0 for every x > 0. Moduli must satisfy this.
  bool positive_after_zero() const;

  bool operator==(const PlFunc& other) const;

 private:
  std::vector<Point> pts_;
  bool increasing_ = true;
  bool zero_at_zero_ = true;
};

/// Piecewise-linear min(k*t, 1) for integer k >= 1; the workhorse witness.
PlFunc pl_min_scale(int k);

/// t / k as a breakpoint pair {(0,0),(1,1/k)}.
PlFunc pl_shrink(int k);

}  // namespace clw
