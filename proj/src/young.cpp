#include "youngfn/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "youngfn/errors.hpp"
#include "youngfn/quadrature.hpp"

namespace youngfn {
namespace {

double bump(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(1.0 / (u * u - 1.0));
}

constexpr QuadratureOptions kUnitQuad{1e-13, 40};

}  // namespace

Mollifier::Mollifier(double epsilon) : eps_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.125)) throw DomainError("epsilon must lie in (0, 1/8)");
  const double half = integrate(bump, 0.0, 1.0, kUnitQuad);
  c_ = 1.0 / (2.0 * half);
  init_moments();
}

Mollifier::Mollifier(double epsilon, double normalization) : eps_(epsilon), c_(normalization) {
  if (!(epsilon > 0.0 && epsilon < 0.125)) throw DomainError("epsilon must lie in (0, 1/8)");
  if (!(normalization > 0.0) || !std::isfinite(normalization))
    throw ValidationError("mollifier normalisation must be positive");
  init_moments();
}

void Mollifier::init_moments() {
  m2_ = 2.0 * eps_ * eps_ * c_ * integrate([](double u) { return u * u * bump(u); }, 0.0, 1.0, kUnitQuad);
  h0_ = ramp_gap_integral(0.0);
}

double Mollifier::operator()(double y) const { return c_ / eps_ * bump(y / eps_); }

double mollifier_eval(const Mollifier& m, double y) { return m(y); }

double Mollifier::mass_above(double t) const {
  const double u = t / eps_;
  if (u <= -1.0) return 1.0;
  if (u >= 1.0) return 0.0;
  if (u < 0.0) return 1.0 - mass_above(-t);
  return c_ * integrate(bump, u, 1.0, kUnitQuad);
}

double Mollifier::first_moment_above(double s) const {
  const double u = s / eps_;
  if (u >= 1.0) return 0.0;
  const double lo = std::max(u, -1.0);
  return eps_ * c_ * integrate([](double v) { return v * bump(v); }, lo, 1.0, kUnitQuad);
}

double Mollifier::ramp_gap(double s) const {
  const double a = std::abs(s) / eps_;
  if (a >= 1.0) return 0.0;
  return eps_ * c_ * integrate([a](double v) { return (v - a) * bump(v); }, a, 1.0, kUnitQuad);
}

double Mollifier::ramp_gap_integral(double s) const {
  const double a = s / eps_;
  if (a <= -1.0) return 0.0;
  if (a >= 1.0) return 0.5 * m2_;
  const double h = 0.5 * eps_ * eps_ * c_ *
                   integrate([a](double v) { return (a + v) * (a + v) * bump(v); }, -a, 1.0, kUnitQuad);
  return s > 0.0 ? h - 0.5 * s * s : h;
}

EpsilonChoice select_epsilon(const PiecewiseDerivative& hat) {
  double max_jump = 0.0;
  for (const auto& k : hat.kinks())
    if (k.mollified) max_jump = std::max(max_jump, std::abs(k.jump()));
  const double slope_bound = std::max(0.25, max_jump);

  double eps = kDefaultEpsilon;
  for (int attempt = 0; attempt < 5; ++attempt, eps *= 0.5) {
    const Mollifier m(eps);
    const double m1 = m.first_moment_above(0.0);
    const double bound = slope_bound * m1;
    if (m1 <= 0.25 && bound < 0.0625) return {eps, m1, max_jump, bound};
  }
  throw ConstructionError("no epsilon in {2^-4, ..., 2^-8} satisfies the mollification error bound");
}

YoungFunction::YoungFunction(double p, ThetaSpec theta, std::vector<std::uint64_t> c,
                             PiecewiseDerivative derivative, Mollifier mollifier,
                             std::vector<KnotValue> knot_cumulative)
    : theta_(theta),
      c_(std::move(c)),
      derivative_(std::move(derivative)),
      mollifier_(mollifier),
      knots_(std::move(knot_cumulative)),
      kinks_(derivative_.kinks()) {
  if (p != derivative_.p()) throw ValidationError("p does not match the derivative");
  const auto& segs = derivative_.segments();
  if (knots_.size() != segs.size())
    throw ValidationError("cumulative table must have one entry per segment");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].x != segs[i].left) throw IntegrityError("cumulative table knots do not match segments");
    if (!std::isfinite(knots_[i].value)) throw IntegrityError("cumulative table has non-finite values");
    if (i == 0 ? knots_[i].value != 0.0 : !(knots_[i].value > knots_[i - 1].value))
      throw IntegrityError("cumulative table is not monotone");
  }
  const double eps = mollifier_.epsilon();
  double prev = -1.0;
  for (const auto& k : kinks_) {
    if (!k.mollified) continue;
    if (prev > 0.0 && !(k.x - prev > 2.0 * eps)) throw ValidationError("smoothing windows overlap");
    prev = k.x;
  }
}

double YoungFunction::mollify_from() const {
  return p() >= 2.0 ? 1.0 : 1.25 - epsilon();
}

std::vector<Kink> YoungFunction::windows() const {
  std::vector<Kink> out;
  for (const auto& k : kinks_)
    if (k.mollified) out.push_back(k);
  return out;
}

YoungFunction::Local YoungFunction::locate(double x) const {
  Local l;
  l.segment = derivative_.segment_index(x);
  const double eps = mollifier_.epsilon();
  if (l.segment >= 1) {
    const Kink& k = kinks_[l.segment - 1];
    if (k.mollified && x - k.x < eps) l.left = &k;
  }
  if (l.segment < kinks_.size()) {
    const Kink& k = kinks_[l.segment];
    if (k.mollified && k.x - x < eps) l.right = &k;
  }
  return l;
}

double YoungFunction::eval(double x) const {
  const Local l = locate(x);
  const auto& seg = derivative_.segments()[l.segment];
  double v = knots_[l.segment].value + seg.integral_from_left(x);
  if (l.segment >= 1) {
    const Kink& k = kinks_[l.segment - 1];
    if (k.mollified) {
      const double tail = l.left ? mollifier_.ramp_gap_integral(x - k.x) : 0.5 * mollifier_.second_moment();
      v -= k.jump() * (tail - mollifier_.ramp_gap_integral_at_zero());
    }
  }
  if (l.right) v -= l.right->jump() * mollifier_.ramp_gap_integral(x - l.right->x);
  return v;
}

double YoungFunction::d1(double x) const {
  const Local l = locate(x);
  double v = derivative_.segments()[l.segment].value(x);
  if (l.left) v -= l.left->jump() * mollifier_.ramp_gap(x - l.left->x);
  if (l.right) v -= l.right->jump() * mollifier_.ramp_gap(x - l.right->x);
  return v;
}

double YoungFunction::d2(double x) const {
  const Local l = locate(x);
  const Kink* k = l.left ? l.left : l.right;
  if (k) {
    // Take the side where the smoothed mass is below 1/2 so nothing cancels.
    const double t = k->x - x;
    if (t >= 0.0) return k->slope_left - k->jump() * mollifier_.mass_above(t);
    return k->slope_right + k->jump() * mollifier_.mass_above(-t);
  }
  return derivative_.segments()[l.segment].slope(x);
}

double YoungFunction::d2_log2(double x) const {
  const double v = d2(x);
  if (std::isnormal(v)) return std::log2(v);
  const Local l = locate(x);
  if (l.left || l.right) return v > 0.0 ? std::log2(v) : -std::numeric_limits<double>::infinity();
  return derivative_.segments()[l.segment].slope_log2(x);
}

double d1_eval(const YoungFunction& y, double x) { return y.d1(x); }
double d2_eval(const YoungFunction& y, double x) { return y.d2(x); }

YoungFunction build_young(const PiecewiseDerivative& hat, const ThetaSpec& theta,
                          std::vector<std::uint64_t> c, double epsilon) {
  const Mollifier m(epsilon);
  const auto& segs = hat.segments();
  const auto kinks = hat.kinks();
  const double h0 = m.ramp_gap_integral_at_zero();
  const double full = 0.5 * m.second_moment();

  std::vector<KnotValue> table;
  table.reserve(segs.size());
  table.push_back({0.0, 0.0});
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    double v = table.back().value + segs[i].integral_from_left(segs[i].right);
    if (i >= 1 && kinks[i - 1].mollified) v -= kinks[i - 1].jump() * (full - h0);
    if (kinks[i].mollified) v -= kinks[i].jump() * h0;
    table.push_back({segs[i + 1].left, v});
  }
  return YoungFunction(hat.p(), theta, std::move(c), hat, m, std::move(table));
}

YoungFunction build_from_family(const MeasureFamily& family, const BuildOptions& opts) {
  const ScaleSequence scale = build_scale(family, opts.horizon);
  const PiecewiseDerivative hat = build_hat_upsilon(scale.c, opts.theta, family.p());
  const double eps = opts.epsilon ? *opts.epsilon : select_epsilon(hat).epsilon;
  return build_young(hat, opts.theta, scale.c, eps);
}

}  // namespace youngfn
