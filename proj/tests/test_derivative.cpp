#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "youngfn/derivative.hpp"
#include "youngfn/errors.hpp"

using namespace youngfn;

namespace {

const std::vector<std::uint64_t> kC{1, 3, 6, 13, 27};

// Straight from the definition: interpolate between the theta values at 2^{c_n}.
double hat_oracle(double x, double p, const std::vector<std::uint64_t>& c, double beta) {
  auto th = [&](double n) { return n == 0 ? 0.5 : std::pow(n, beta); };
  if (x < 2.0) {
    if (p >= 2.0) return x / 4.0;
    const double q = 4.0 / p - 1.0;
    const double x0 = std::pow(1.0 / (6.0 * q), 1.0 / (q - 1.0));
    const double f0 = std::pow(x0, q);
    const double a = f0 + (1.25 - x0) / 6.0;
    if (x <= x0) return std::pow(x, q);
    if (x <= 1.25) return f0 + (x - x0) / 6.0;
    return a + (x - 1.25) * (0.5 - a) / 0.75;
  }
  for (std::size_t n = 0; n + 1 < c.size(); ++n) {
    const double l = std::ldexp(1.0, static_cast<int>(c[n])), r = std::ldexp(1.0, static_cast<int>(c[n + 1]));
    if (x < r) return th(double(n)) + (x - l) / (r - l) * (th(double(n + 1)) - th(double(n)));
  }
  return th(double(c.size() - 1));
}

}  // namespace

TEST_CASE("theta specs") {
  CHECK(ThetaSpec::sqrt()(9.0) == 3.0);
  CHECK(ThetaSpec::power(0.25)(16.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ThetaSpec::power(0.0), DomainError);
  CHECK_THROWS_AS(ThetaSpec::power(0.75), DomainError);
  CHECK_NOTHROW(ThetaSpec::power(0.5));
}

TEST_CASE("stretched step function") {
  const std::vector<std::uint64_t> c{1, 2, 4};
  const auto s = ThetaSpec::sqrt();
  CHECK(bar_upsilon_eval(c, s, 0.0) == 0.5);
  CHECK(bar_upsilon_eval(c, s, 1.9) == 0.5);
  CHECK(bar_upsilon_eval(c, s, 2.0) == 1.0);
  CHECK(bar_upsilon_eval(c, s, 15.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("power join point") {
  const auto j = x0_q(1.0);
  CHECK(j.q == 3.0);
  CHECK(j.x0 == doctest::Approx(std::sqrt(1.0 / 18.0)).epsilon(1e-14));
  CHECK(j.x0 == doctest::Approx(0.23570).epsilon(1e-4));
  for (double p : {0.3, 0.9, 1.5, 1.9}) {
    const auto k = x0_q(p);
    CHECK(k.q * std::pow(k.x0, k.q - 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(x0_q(2.0), DomainError);
}

TEST_CASE("hat derivative values for p >= 2") {
  const auto h = build_hat_upsilon(kC, ThetaSpec::sqrt(), 2.0);
  CHECK(h(1.0) == 0.25);
  CHECK(h(2.0) == 0.5);
  CHECK(h(8.0) == 1.0);
  CHECK(h.horizon() == std::ldexp(1.0, 27));
  CHECK(h.mollify_from() == 1.0);
}

TEST_CASE("hat derivative matches a direct oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lx(std::log(1e-4), std::log(std::ldexp(1.0, 27)));
  for (double p : oracle::all_p()) {
    for (double beta : {0.5, 0.25}) {
      const auto spec = beta == 0.5 ? ThetaSpec::sqrt() : ThetaSpec::power(beta);
      const auto h = build_hat_upsilon(kC, spec, p);
      for (int i = 0; i < 300; ++i) {
        const double x = std::exp(lx(rng));
        CHECK(h(x) == doctest::Approx(hat_oracle(x, p, kC, beta)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("hat integral agrees with piecewise simpson") {
  for (double p : oracle::all_p()) {
    const auto h = build_hat_upsilon(kC, ThetaSpec::sqrt(), p);
    std::vector<double> cuts{0.0};
    if (p < 2.0) cuts.insert(cuts.end(), {x0_q(p).x0, 1.25});
    for (auto c : kC) cuts.push_back(std::ldexp(1.0, static_cast<int>(c)));
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size() && cuts[i + 1] <= std::ldexp(1.0, 13); ++i) {
      acc += oracle::simpson([&](double x) { return hat_oracle(x, p, kC, 0.5); }, cuts[i], cuts[i + 1], 2000);
      CHECK(h.integral(cuts[i + 1]) == doctest::Approx(acc).epsilon(1e-10));
    }
  }
}

TEST_CASE("kinks and slopes") {
  const auto h = build_hat_upsilon(kC, ThetaSpec::sqrt(), 1.0);
  const auto ks = h.kinks();
  REQUIRE(!ks.empty());
  for (const auto& k : ks)
    if (k.x < 1.25) CHECK(!k.mollified);
  bool saw_5_4 = false;
  for (const auto& k : ks) {
    if (k.x == 1.25) saw_5_4 = k.mollified;
    if (k.x > 2.0) CHECK(k.jump() > 0.0);
  }
  CHECK(saw_5_4);
  CHECK(h.slope(1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(std::exp2(h.slope_log2(100.0)) == doctest::Approx(h.slope(100.0)).epsilon(1e-14));
}

TEST_CASE("very long horizons stay representable") {
  const std::vector<std::uint64_t> c{1, 2, 4, 900, 2000};
  const auto h = build_hat_upsilon(c, ThetaSpec::sqrt(), 2.0);
  CHECK(h.horizon() == std::ldexp(1.0, 1020));
  CHECK(std::isfinite(h(std::ldexp(1.0, 1000))));
  CHECK(h.slope(std::ldexp(1.0, 950)) >= 0.0);
  CHECK(std::isfinite(h.slope_log2(std::ldexp(1.0, 950))));
  CHECK_THROWS_AS(build_hat_upsilon({2, 4}, ThetaSpec::sqrt(), 2.0), DomainError);
  CHECK_THROWS_AS(build_hat_upsilon(kC, ThetaSpec::sqrt(), 0.0), DomainError);
}
