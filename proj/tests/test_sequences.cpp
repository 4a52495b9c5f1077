#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "youngfn/errors.hpp"
#include "youngfn/sequences.hpp"

using namespace youngfn;

namespace {

// Literal greedy search, one integer at a time.
std::vector<std::uint64_t> greedy_c(const std::function<double(double)>& tail, const std::vector<double>& d) {
  std::vector<std::uint64_t> c{1};
  for (std::size_t n = 1; n < d.size(); ++n) {
    std::uint64_t k = std::max<std::uint64_t>(2 * c.back(), c.back() + 1);
    while (!(tail(static_cast<double>(k)) < d[n])) ++k;
    c.push_back(k);
  }
  return c;
}

}  // namespace

TEST_CASE("two-level step tail") {
  auto tail = [](double k) { return k <= 1.0 ? 3.0 : 0.0; };
  const auto d = build_d(tail(1.0), 4);
  CHECK(d == std::vector<double>{6.0, 3.0, 1.5, 0.75});
  CHECK(choose_c(tail, d, 4) == std::vector<std::uint64_t>{1, 2, 4, 8});
}

TEST_CASE("d_1 is at least one") {
  const auto d = build_d(0.1, 3);
  CHECK(d == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("choose_c agrees with a literal greedy search") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto atoms = oracle::random_atoms(rng, 3);
    for (double p : {0.5, 1.0, 2.0}) {
      auto tail = [&](double k) { return oracle::p_tail(atoms, p, k); };
      const auto d = build_d(tail(1.0), 8);
      CHECK(choose_c(tail, d, 8) == greedy_c(tail, d));
    }
  }
}

TEST_CASE("scale sequence of the example family") {
  const auto fam = oracle::example(2.0);
  const auto s = build_scale(fam);
  CHECK(s.horizon() == kDefaultHorizon);
  CHECK_NOTHROW(s.validate());
  CHECK(s.c[0] == 1);
  for (std::size_t n = 0; n < s.horizon(); ++n) {
    CHECK(p_tail(fam, static_cast<double>(s.c[n])) < s.d[n]);
    if (n > 0) CHECK(s.c[n] >= 2 * s.c[n - 1]);
  }
  ScaleSequence bad = s;
  bad.c[3] = bad.c[2];
  CHECK_THROWS_AS(bad.validate(), ConstructionError);
}

TEST_CASE("counting derivative and the basic function") {
  const std::vector<std::uint64_t> c{1, 2, 4, 8};
  CHECK(upsilon_count(c, 0) == 0);
  CHECK(upsilon_count(c, 1) == 1);
  CHECK(upsilon_count(c, 3) == 2);
  CHECK(upsilon_count(c, 7) == 3);
  CHECK(upsilon_count(c, 8) == 4);
  CHECK(upsilon_count(c, 1000) == 4);
  CHECK(upsilon_cumulative(c, 2) == 3);
  CHECK(upsilon_cumulative(c, 10) == 1 + 2 + 2 + 3 + 3 + 3 + 3 + 4 + 4 + 4);

  const BasicYoung b(c);
  CHECK(b(3.0) == 3.0);
  CHECK(b(1.0) == 0.0);
  CHECK(b(0.5) == 0.0);
  CHECK(b(2.5) == doctest::Approx(1.0 + 0.5 * 2.0));
  CHECK(b.derivative(0.9) == 0.0);
  CHECK(b.derivative(4.0) == 3.0);
}
