#include "youngfn/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "youngfn/errors.hpp"

namespace youngfn {
namespace {

// ldexp exponents far below -1074 all give 0; clamp so the int conversion is safe.
int clamp_exponent(std::int64_t e) {
  return static_cast<int>(std::clamp<std::int64_t>(e, -4096, 4096));
}

}  // namespace

ThetaSpec ThetaSpec::power(double beta) {
  if (!(beta > 0.0 && beta <= 0.5)) throw DomainError("theta power must lie in (0, 1/2]");
  return ThetaSpec(Kind::Power, beta);
}

double ThetaSpec::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("theta argument must be non-negative");
  return kind_ == Kind::Sqrt ? std::sqrt(x) : std::pow(x, beta_);
}

double theta_eval(const ThetaSpec& spec, double x) { return spec(x); }

double bar_upsilon_eval(const std::vector<std::uint64_t>& c, const ThetaSpec& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("argument must be non-negative");
  if (x < 2.0) return 0.5;
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 1023 || std::ldexp(1.0, static_cast<int>(c[i])) > x) break;
    n = i + 1;
  }
  if (n == c.size()) throw RangeError("argument beyond 2^{c_N}; extend the horizon");
  return spec(static_cast<double>(n));
}

PowerJoin x0_q(double p) {
  if (!(p > 0.0 && p < 2.0)) throw DomainError("x0_q requires p in (0, 2)");
  const double q = 4.0 / p - 1.0;
  const double x0 = std::pow(p / (6.0 * (4.0 - p)), p / (4.0 - 2.0 * p));
  return {x0, q};
}

double Segment::fraction(double x) const {
  if (right_log2 >= 0) {
    const int e = clamp_exponent(-right_log2);
    return std::ldexp(x - left, e) / (1.0 - std::ldexp(left, e));
  }
  return (x - left) / (right - left);
}

double Segment::value(double x) const {
  if (kind == Kind::Power) return std::pow(x, exponent);
  return value_left + (value_right - value_left) * fraction(x);
}

double Segment::slope(double x) const {
  if (kind == Kind::Power) return exponent * std::pow(x, exponent - 1.0);
  const double rise = value_right - value_left;
  if (right_log2 >= 0) {
    const int e = clamp_exponent(-right_log2);
    return std::ldexp(rise / (1.0 - std::ldexp(left, e)), e);
  }
  return rise / (right - left);
}

double Segment::slope_log2(double x) const {
  if (kind == Kind::Power) return std::log2(exponent) + (exponent - 1.0) * std::log2(x);
  const double rise = std::log2(value_right - value_left);
  if (right_log2 >= 0) {
    const int e = clamp_exponent(-right_log2);
    return rise - static_cast<double>(right_log2) - std::log2(1.0 - std::ldexp(left, e));
  }
  return rise - std::log2(right - left);
}

double Segment::integral_from_left(double x) const {
  if (kind == Kind::Power)
    return (std::pow(x, exponent + 1.0) - std::pow(left, exponent + 1.0)) / (exponent + 1.0);
  return (x - left) * (value_left + 0.5 * (value_right - value_left) * fraction(x));
}

PiecewiseDerivative::PiecewiseDerivative(double p, std::vector<Segment> segments, double horizon)
    : p_(p), segments_(std::move(segments)), horizon_(horizon) {
  auto fail = [](const std::string& what) { throw ConstructionError("derivative: " + what); };
  if (!(p_ > 0.0)) fail("p must be positive");
  if (segments_.empty()) fail("no segments");
  if (segments_.front().left != 0.0 || segments_.front().value_left != 0.0)
    fail("must start at the origin with value 0");
  if (!(horizon_ > 0.0) || horizon_ > std::ldexp(1.0, kHorizonLog2Guard))
    fail("horizon outside (0, 2^1020]");
  if (segments_.back().right < horizon_) fail("segments do not cover the horizon");

  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.right > s.left)) fail("empty segment");
    if (!(s.value_right > 0.0) || s.value_right < s.value_left) fail("must be positive and non-decreasing");
    if (s.kind == Segment::Kind::Power && (i != 0 || !(s.exponent > 1.0)))
      fail("power piece must come first with exponent > 1");
    if (i == 0) continue;
    const auto& prev = segments_[i - 1];
    if (prev.right != s.left) fail("segments are not contiguous");
    const double tol = 1e-12 * std::max(1.0, std::abs(s.value_left));
    if (std::abs(prev.value_right - s.value_left) > tol) {
      std::ostringstream os;
      os << "discontinuous at " << s.left;
      fail(os.str());
    }
  }

  // Concavity from the first dyadic knot onward (and everywhere when p >= 2).
  const auto ks = kinks();
  for (const auto& k : ks) {
    if (p_ < 2.0 && k.x < 2.0) continue;
    if (k.slope_right > k.slope_left) {
      std::ostringstream os;
      os << "slope increases at " << k.x;
      fail(os.str());
    }
  }
  for (const auto& k : ks) {
    if (k.x == 2.0) {
      if (k.slope_right > 0.25) fail("first dyadic slope exceeds 1/4");
      break;
    }
  }
}

std::optional<PowerJoin> PiecewiseDerivative::power_join() const {
  if (p_ >= 2.0) return std::nullopt;
  return x0_q(p_);
}

std::size_t PiecewiseDerivative::segment_index(double x) const {
  if (!(x >= 0.0)) throw DomainError("argument must be non-negative");
  if (x > horizon_) {
    std::ostringstream os;
    os << "argument " << x << " beyond horizon " << horizon_;
    throw RangeError(os.str());
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.left; });
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

double PiecewiseDerivative::operator()(double x) const {
  return segments_[segment_index(x)].value(x);
}

double PiecewiseDerivative::slope(double x) const {
  return segments_[segment_index(x)].slope(x);
}

double PiecewiseDerivative::slope_log2(double x) const {
  return segments_[segment_index(x)].slope_log2(x);
}

double PiecewiseDerivative::integral(double x) const {
  const std::size_t idx = segment_index(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < idx; ++i)
    acc += segments_[i].integral_from_left(segments_[i].right);
  return acc + segments_[idx].integral_from_left(x);
}

std::vector<Kink> PiecewiseDerivative::kinks() const {
  std::vector<Kink> out;
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const double x = segments_[i].left;
    const bool mollified = p_ >= 2.0 ? x > 1.0 : x >= 1.25;
    out.push_back({x, segments_[i - 1].slope(x), segments_[i].slope(x), mollified});
  }
  return out;
}

PiecewiseDerivative build_hat_upsilon(const std::vector<std::uint64_t>& c, const ThetaSpec& spec,
                                      double p) {
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (c.size() < 2 || c.front() != 1) throw DomainError("c must start with c_1 = 1");

  const std::uint64_t top = std::min<std::uint64_t>(c.back(), kHorizonLog2Guard);
  const double horizon = std::ldexp(1.0, static_cast<int>(top));

  std::vector<Segment> segs;
  if (p >= 2.0) {
    segs.push_back({Segment::Kind::Affine, 0.0, 2.0, 1, 0.0, 0.5, 0.0});
  } else {
    const auto [x0, q] = x0_q(p);
    const double f0 = std::pow(x0, q);
    const double at_5_4 = f0 + (1.25 - x0) / 6.0;
    segs.push_back({Segment::Kind::Power, 0.0, x0, -1, 0.0, f0, q});
    segs.push_back({Segment::Kind::Affine, x0, 1.25, -1, f0, at_5_4, 0.0});
    segs.push_back({Segment::Kind::Affine, 1.25, 2.0, 1, at_5_4, 0.5, 0.0});
  }

  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (c[i] >= top) break;
    Segment s;
    s.kind = Segment::Kind::Affine;
    s.left = std::ldexp(1.0, static_cast<int>(c[i]));
    const std::uint64_t r = c[i + 1];
    s.right = r <= 1023 ? std::ldexp(1.0, static_cast<int>(r)) : std::numeric_limits<double>::infinity();
    s.right_log2 = static_cast<std::int64_t>(std::min<std::uint64_t>(r, std::uint64_t{1} << 62));
    s.value_left = i == 0 ? 0.5 : spec(static_cast<double>(i));
    s.value_right = spec(static_cast<double>(i + 1));
    segs.push_back(s);
  }
  return PiecewiseDerivative(p, std::move(segs), horizon);
}

}  // namespace youngfn
