#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "oracles.hpp"
#include "youngfn/errors.hpp"
#include "youngfn/young.hpp"

using namespace youngfn;

namespace {

const YoungFunction& young_for(double p) {
  static std::map<double, YoungFunction> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, build_from_family(oracle::example(p))).first;
  return it->second;
}

}  // namespace

TEST_CASE("mollifier moments against simpson") {
  const Mollifier m(kDefaultEpsilon);
  const oracle::Bump b(kDefaultEpsilon);
  const double e = m.epsilon();
  CHECK(m.normalization() == doctest::Approx(b.c).epsilon(1e-10));
  CHECK(oracle::simpson([&](double y) { return m(y); }, -e, e, 20000) == doctest::Approx(1.0).epsilon(1e-10));
  for (double y : {0.001, 0.01, 0.03, 0.06}) CHECK(m(y) == m(-y));
  CHECK(m(e) == 0.0);
  CHECK(m(-2 * e) == 0.0);
  CHECK(m.mass_above(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.mass_above(-e) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.mass_above(e) == 0.0);
  CHECK(m.mass_above(0.02) == doctest::Approx(oracle::simpson(b, 0.02, e, 20000)).epsilon(1e-9));
  CHECK(m.first_moment_above(0.01) ==
        doctest::Approx(oracle::simpson([&](double y) { return y * b(y); }, 0.01, e, 20000)).epsilon(1e-9));
  CHECK(m.second_moment() ==
        doctest::Approx(oracle::simpson([&](double y) { return y * y * b(y); }, -e, e, 20000)).epsilon(1e-9));
  CHECK(Mollifier(0.03125).normalization() == doctest::Approx(m.normalization()).epsilon(1e-12));
  CHECK_THROWS_AS(Mollifier(0.2), DomainError);
  CHECK_THROWS_AS(Mollifier(0.0), DomainError);
}

TEST_CASE("ramp gap is the smoothing error of a ramp") {
  const Mollifier m(kDefaultEpsilon);
  const oracle::Bump b(kDefaultEpsilon);
  auto ramp = [](double s) { return std::max(s, 0.0); };
  for (double s : {-0.07, -0.05, -0.02, 0.0, 0.013, 0.04, 0.0624, 0.08}) {
    const double want = oracle::convolve(ramp, b, s, 20000) - ramp(s);
    CHECK(std::abs(m.ramp_gap(s) - want) <= 1e-9 * std::abs(want) + 1e-14);
    CHECK(m.ramp_gap(s) == m.ramp_gap(-s));
  }
  CHECK(m.ramp_gap_integral(-0.1) == 0.0);
  CHECK(m.ramp_gap_integral(0.1) == doctest::Approx(0.5 * m.second_moment()).epsilon(1e-12));
  CHECK(m.ramp_gap_integral_at_zero() == doctest::Approx(m.ramp_gap_integral(0.0)).epsilon(1e-15));
  const double mid = oracle::simpson([&](double s) { return m.ramp_gap(s); }, -m.epsilon(), 0.02, 4000);
  CHECK(m.ramp_gap_integral(0.02) == doctest::Approx(mid).epsilon(1e-8));
}

TEST_CASE("closed-form values on the first stretch") {
  for (double p : {2.0, 3.0}) {
    const auto& y = young_for(p);
    CHECK(y(0.0) == 0.0);
    CHECK(y(1.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(y.d1(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(y.d2(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  }
}

TEST_CASE("smoothed derivative equals a direct convolution") {
  for (double p : oracle::all_p()) {
    const auto& y = young_for(p);
    const oracle::Bump b(y.epsilon());
    auto hat = [&](double x) { return y.hat(x); };
    for (const auto& k : y.windows()) {
      if (k.x > 1e6) break;
      for (double t : {-0.99, -0.6, -0.2, 0.0, 0.3, 0.75, 0.98}) {
        const double x = k.x + t * y.epsilon();
        CHECK(y.d1(x) == doctest::Approx(oracle::convolve(hat, b, x, 8000)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("Upsilon at far points matches piecewise simpson of Upsilon'") {
  for (double p : oracle::all_p()) {
    const auto& y = young_for(p);
    const double far = std::ldexp(1.0, 60);
    double knot = 0.0;
    for (auto c : y.c())
      if (c <= 60) knot = std::ldexp(1.0, static_cast<int>(c));
    for (double target : {knot, far}) {
      std::vector<double> cuts{0.0};
      for (const auto& k : y.windows())
        if (k.x < target) cuts.insert(cuts.end(), {k.x - y.epsilon(), k.x + y.epsilon()});
      for (const auto& s : y.derivative().segments())
        if (s.left > 0.0 && s.left < target) cuts.push_back(s.left);
      cuts.push_back(target);
      std::sort(cuts.begin(), cuts.end());
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += oracle::simpson([&](double x) { return y.d1(x); }, cuts[i], cuts[i + 1], 4000);
      CHECK(y(target) == doctest::Approx(acc).epsilon(1e-8));
    }
  }
}

TEST_CASE("finite differences of d1 agree with d2") {
  std::mt19937_64 rng(11);
  for (double p : oracle::all_p()) {
    const auto& y = young_for(p);
    const auto ws = y.windows();
    std::uniform_real_distribution<double> lx(std::log(0.05), std::log(1e6));
    std::uniform_real_distribution<double> in(-0.9, 0.9);
    for (int i = 0; i < 50; ++i) {
      // Half of the points sit inside a smoothing window.
      double x = std::exp(lx(rng));
      if (i % 2 == 0) x = ws[static_cast<std::size_t>(i / 2) % std::min<std::size_t>(ws.size(), 4)].x + in(rng) * y.epsilon();
      const double h = std::min(1e-5, 1e-3 * x);
      const double fd2 = (y.d1(x + h) - y.d1(x - h)) / (2 * h);
      const double fd1 = (y(x + h) - y(x - h)) / (2 * h);
      // Rounding in the differenced values bounds what the quotient can resolve.
      const double r2 = 4 * std::numeric_limits<double>::epsilon() * y.d1(x) / h;
      const double r1 = 4 * std::numeric_limits<double>::epsilon() * y(x) / h;
      INFO("p=" << p << " x=" << x);
      CHECK(std::abs(fd2 - y.d2(x)) <= 1e-6 * std::abs(y.d2(x)) + r2);
      CHECK(std::abs(fd1 - y.d1(x)) <= 1e-6 * y.d1(x) + r1);
    }
  }
}

TEST_CASE("d2_log2 agrees with d2 where both are representable") {
  const auto& y = young_for(2.0);
  for (double x : {0.5, 3.0, 100.0, 1e4}) CHECK(std::exp2(y.d2_log2(x)) == doctest::Approx(y.d2(x)).epsilon(1e-12));
}

TEST_CASE("domain errors") {
  const auto& y = young_for(2.0);
  CHECK_THROWS_AS(y(-1.0), DomainError);
  CHECK_THROWS_AS(y(std::nan("")), DomainError);
  CHECK_THROWS_AS(y(y.horizon() * 2), RangeError);
  CHECK_NOTHROW(y(y.horizon()));
}

TEST_CASE("epsilon selection and the pipeline") {
  const auto fam = oracle::example(2.0);
  const auto s = build_scale(fam);
  const auto hat = build_hat_upsilon(s.c, ThetaSpec::sqrt(), 2.0);
  const auto e = select_epsilon(hat);
  CHECK(e.epsilon == kDefaultEpsilon);
  CHECK(e.knot_gap_bound < 1.0 / 16.0);
  const auto y = build_young(hat, ThetaSpec::sqrt(), s.c, e.epsilon);
  CHECK(y(50.0) == young_for(2.0)(50.0));
  BuildOptions o;
  o.epsilon = 0.03125;
  o.theta = ThetaSpec::power(0.25);
  const auto z = build_from_family(fam, o);
  CHECK(z.epsilon() == 0.03125);
  CHECK(z.theta() == ThetaSpec::power(0.25));
  CHECK(z.mollify_from() == 1.0);
  CHECK(young_for(1.0).mollify_from() == doctest::Approx(1.25 - kDefaultEpsilon));
}
