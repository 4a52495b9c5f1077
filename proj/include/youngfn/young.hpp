#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "youngfn/derivative.hpp"
#include "youngfn/measures.hpp"
#include "youngfn/sequences.hpp"

namespace youngfn {

inline constexpr double kDefaultEpsilon = 0.0625;  // 2^-4

/// Standard bump eta_eps(y) = (C/eps) exp(1/((y/eps)^2 - 1)) on (-eps, eps).
///
/// All moments are single adaptive-Simpson quadratures in the unit variable u = y/eps.
class Mollifier {
 public:
  Mollifier() = default;
  /// Computes the normalisation constant by quadrature.
  explicit Mollifier(double epsilon);
  /// Uses a stored normalisation constant.
  Mollifier(double epsilon, double normalization);

  double epsilon() const { return eps_; }
  double normalization() const { return c_; }

  double operator()(double y) const;
  /// int_t^eps eta, for t in [-eps, eps] (clamped outside).
  double mass_above(double t) const;
  /// int_s^eps y eta(y) dy for s >= 0.
  double first_moment_above(double s) const;
  /// int y^2 eta.
  double second_moment() const { return m2_; }
  /// Gap function: (eta * ramp)(s) - ramp(s), even in s, zero for |s| >= eps.
  double ramp_gap(double s) const;
  /// Antiderivative of ramp_gap from -eps: 0 below -eps, m2/2 above eps.
  double ramp_gap_integral(double s) const;
  /// ramp_gap_integral(0), cached.
  double ramp_gap_integral_at_zero() const { return h0_; }

 private:
  void init_moments();

  double eps_ = kDefaultEpsilon;
  double c_ = 0.0;
  double m2_ = 0.0;
  double h0_ = 0.0;
};

double mollifier_eval(const Mollifier& m, double y);

struct EpsilonChoice {
  double epsilon;
  double first_moment;  // int_0^eps y eta
  double max_jump;      // largest slope drop over the smoothed kinks
  double knot_gap_bound;
};

/// Default 2^-4, verified; halves up to four times if a check fails.
EpsilonChoice select_epsilon(const PiecewiseDerivative& hat);

struct KnotValue {
  double x;
  double value;
};

/// The C^2 Young function: Upsilon' is the mollified piecewise derivative.
class YoungFunction {
 public:
  YoungFunction() = default;

  /// Assembles from stored parts, validating the cumulative table.
  YoungFunction(double p, ThetaSpec theta, std::vector<std::uint64_t> c,
                PiecewiseDerivative derivative, Mollifier mollifier,
                std::vector<KnotValue> knot_cumulative);

  double p() const { return derivative_.p(); }
  double epsilon() const { return mollifier_.epsilon(); }
  const ThetaSpec& theta() const { return theta_; }
  const std::vector<std::uint64_t>& c() const { return c_; }
  const PiecewiseDerivative& derivative() const { return derivative_; }
  const Mollifier& mollifier() const { return mollifier_; }
  const std::vector<KnotValue>& knot_cumulative() const { return knots_; }
  double horizon() const { return derivative_.horizon(); }
  /// Start of the smoothed region: 1 for p >= 2, 5/4 - eps for p < 2.
  double mollify_from() const;

  /// Upsilon.
  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  /// Upsilon' (the smoothed derivative).
  double d1(double x) const;
  /// Upsilon''.
  double d2(double x) const;
  /// log2 of Upsilon''; stays finite where Upsilon'' underflows (very long dyadic stretches).
  double d2_log2(double x) const;
  /// The unsmoothed derivative and its integral, for comparisons.
  double hat(double x) const { return derivative_(x); }
  double hat_integral(double x) const { return derivative_.integral(x); }

  /// Smoothed kinks (windows of half-width eps).
  std::vector<Kink> windows() const;

 private:
  struct Local {
    std::size_t segment;
    const Kink* left = nullptr;
    const Kink* right = nullptr;
  };
  Local locate(double x) const;

  ThetaSpec theta_ = ThetaSpec::sqrt();
  std::vector<std::uint64_t> c_;
  PiecewiseDerivative derivative_;
  Mollifier mollifier_;
  std::vector<KnotValue> knots_;
  std::vector<Kink> kinks_;  // kinks_[i] sits at the left end of segment i + 1
};

double d1_eval(const YoungFunction& y, double x);
double d2_eval(const YoungFunction& y, double x);

/// Computes the cumulative table and assembles the function.
YoungFunction build_young(const PiecewiseDerivative& hat, const ThetaSpec& theta,
                          std::vector<std::uint64_t> c, double epsilon);

struct BuildOptions {
  ThetaSpec theta = ThetaSpec::sqrt();
  std::optional<double> epsilon;
  int horizon = kDefaultHorizon;
};

/// Whole pipeline: tail -> (d, c) -> derivative -> epsilon -> Upsilon.
YoungFunction build_from_family(const MeasureFamily& family, const BuildOptions& opts = {});

/// Version-tagged JSON artifact; numbers are shortest round-trip decimal strings.
std::string serialize(const YoungFunction& y);
YoungFunction deserialize(const std::string& text);

}  // namespace youngfn
