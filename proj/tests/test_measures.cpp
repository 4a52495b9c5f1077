#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "youngfn/errors.hpp"
#include "youngfn/measures.hpp"

using namespace youngfn;

TEST_CASE("p_tail matches brute force on random families") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lk(std::log(1e-3), std::log(1e4));
  for (int trial = 0; trial < 40; ++trial) {
    const auto atoms = oracle::random_atoms(rng, 1 + trial % 4);
    for (double p : oracle::all_p()) {
      const auto fam = oracle::family_of(atoms, p);
      for (int i = 0; i < 25; ++i) {
        const double k = std::exp(lk(rng));
        CHECK(p_tail(fam, k) == doctest::Approx(oracle::p_tail(atoms, p, k)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("p_tail uses the closed level set") {
  const auto fam = oracle::family_of({{{2.0, 1.0}}}, 2.0);
  CHECK(p_tail(fam, 4.0) == 4.0);
  CHECK(p_tail(fam, std::nextafter(4.0, 5.0)) == 0.0);
  CHECK(p_tail(fam, 0.0) == 4.0);
  CHECK_THROWS_AS(p_tail(fam, -1.0), DomainError);
}

TEST_CASE("small jump mass and integrate_sup") {
  const auto fam = oracle::family_of({{{0.5, 2.0}, {3.0, 1.0}}, {{0.25, 8.0}}}, 1.0);
  CHECK(small_jump_mass(fam, 1.0) == doctest::Approx(std::max(2.0 * 0.25, 8.0 * 0.0625)));
  CHECK(small_jump_mass(fam, 0.3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(small_jump_mass(fam, 0.0), DomainError);

  const double all = integrate_sup(fam, [](double r) { return r; }, Region::all());
  CHECK(all == doctest::Approx(std::max(0.5 * 2.0 + 3.0, 2.0)));
  const double above = integrate_sup(fam, [](double r) { return r; }, Region::radius_above(1.0));
  CHECK(above == doctest::Approx(3.0));
  CHECK_THROWS_AS(integrate_sup(fam, [](double r) { return 1.0 / (r - 3.0); }, Region::all()), DomainError);
}

TEST_CASE("pushforward moves the radii") {
  const auto fam = oracle::family_of({{{2.0, 1.0}, {0.5, 3.0}}}, 2.0);
  const auto pf = fam.pushforward([](double x) { return std::sqrt(x); }, 4.0);
  CHECK(pf.p() == 4.0);
  CHECK(pf.max_radius() == doctest::Approx(std::sqrt(4.0)));
}

TEST_CASE("uniform integrability samples decrease") {
  const auto fam = oracle::example(2.0);
  const auto rep = check_uniform_integrability(fam, {1, 2, 4, 8, 16, 32, 64}, {1.0, 0.5, 0.25, 0.1, 0.01});
  CHECK(rep.tails_decreasing);
  CHECK(rep.small_masses_decreasing);
  CHECK(rep.tail_reaches_zero);
  CHECK_THROWS_AS(check_uniform_integrability(fam, {2, 1}, {1.0}), DomainError);
}

TEST_CASE("measure document parsing") {
  const auto fam = parse_measure_family(R"({"p": 1.5, "members": [{"atoms": [[1, 2], [3, 0.5]]}]})");
  CHECK(fam.p() == 1.5);
  REQUIRE(fam.members().size() == 1);
  CHECK(fam.members()[0].atoms().front().radius == 3.0);
  const auto again = parse_measure_family(dump_measure_family(fam));
  CHECK(again.members()[0].atoms().size() == 2);

  CHECK_THROWS_AS(parse_measure_family("{"), ValidationError);
  CHECK_THROWS_AS(parse_measure_family(R"({"members": []})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_family(R"({"p": 1, "members": []})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_family(R"({"p": 0, "members": [{"atoms": [[1, 1]]}]})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_family(R"({"p": 1, "members": [{"atoms": [[-1, 1]]}]})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_family(R"({"p": 1, "members": [{"atoms": [[1, 0]]}]})"), ValidationError);
  CHECK_THROWS_AS(load_measure_family(oracle::data("no_such_file.json")), ValidationError);
}
