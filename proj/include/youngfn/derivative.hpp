#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace youngfn {

/// Largest argument any evaluator accepts. Keeps Upsilon(x) ~ x * upsilon(x) finite.
inline constexpr int kHorizonLog2Guard = 1020;

/// Push-down function: sqrt or x^beta with beta in (0, 1/2].
class ThetaSpec {
 public:
  enum class Kind { Sqrt, Power };

  static ThetaSpec sqrt() { return ThetaSpec(Kind::Sqrt, 0.5); }
  /// Throws DomainError unless beta lies in (0, 1/2].
  static ThetaSpec power(double beta);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double operator()(double x) const;

  bool operator==(const ThetaSpec&) const = default;

 private:
  ThetaSpec(Kind k, double b) : kind_(k), beta_(b) {}
  Kind kind_;
  double beta_;
};

double theta_eval(const ThetaSpec& spec, double x);

/// Stretched step function: 1/2 on [0, 2), theta(n) on [2^{c_n}, 2^{c_{n+1}}).
double bar_upsilon_eval(const std::vector<std::uint64_t>& c, const ThetaSpec& spec, double x);

/// Exponent q = 4/p - 1 and the point x0 where (x^q)' = 1/6, for p in (0, 2).
struct PowerJoin {
  double x0;
  double q;
};
PowerJoin x0_q(double p);

/// One stretch of the pre-mollification derivative.
///
/// Affine pieces are stored by their endpoint values; the right end may be a power of
/// two beyond double range, in which case `right` is +inf and `right_log2` carries it.
struct Segment {
  enum class Kind { Affine, Power };

  Kind kind = Kind::Affine;
  double left = 0.0;
  double right = 0.0;
  std::int64_t right_log2 = -1;
  double value_left = 0.0;
  double value_right = 0.0;
  double exponent = 0.0;

  /// (x - left) / (right - left), robust to an unrepresentable right end.
  double fraction(double x) const;
  double value(double x) const;
  /// Derivative of the piece at x (constant for affine pieces).
  double slope(double x) const;
  /// log2 of the slope; finite even where the slope itself underflows.
  double slope_log2(double x) const;
  /// Integral of the piece over [left, x].
  double integral_from_left(double x) const;

  bool operator==(const Segment&) const = default;
};

/// A kink of the derivative where mollification acts.
struct Kink {
  double x;
  double slope_left;
  double slope_right;
  bool mollified;
  double jump() const { return slope_left - slope_right; }
};

/// The continuous piecewise derivative before smoothing.
class PiecewiseDerivative {
 public:
  PiecewiseDerivative() = default;
  /// Validates continuity, positivity and slope ordering; throws ConstructionError.
  PiecewiseDerivative(double p, std::vector<Segment> segments, double horizon);

  double p() const { return p_; }
  const std::vector<Segment>& segments() const { return segments_; }
  /// Evaluation limit: min(2^{c_N}, 2^1020).
  double horizon() const { return horizon_; }
  /// Smoothing applies for x beyond this point: 1 (p >= 2) or 5/4 (p < 2, before subtracting eps).
  double mollify_from() const { return p_ >= 2.0 ? 1.0 : 1.25; }
  std::optional<PowerJoin> power_join() const;

  std::size_t segment_index(double x) const;
  double operator()(double x) const;
  double slope(double x) const;
  /// log2 of the slope; finite even where the slope itself underflows.
  double slope_log2(double x) const;
  /// Integral of the derivative over [0, x].
  double integral(double x) const;

  /// Interior segment boundaries with their one-sided slopes.
  std::vector<Kink> kinks() const;

 private:
  double p_ = 0.0;
  std::vector<Segment> segments_;
  double horizon_ = 0.0;
};

/// Pushes the counting derivative down with theta, stretches it over [2^{c_n}, 2^{c_{n+1}}),
/// interpolates the right end points and, for p < 2, replaces [0, 2] by a power/affine join.
PiecewiseDerivative build_hat_upsilon(const std::vector<std::uint64_t>& c, const ThetaSpec& spec,
                                      double p);

}  // namespace youngfn
