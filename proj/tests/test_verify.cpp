#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "oracles.hpp"
#include "youngfn/verify.hpp"

using namespace youngfn;

namespace {

VerifyOptions quick() {
  VerifyOptions o;
  o.per_decade = 96;
  o.window_points = 24;
  o.random_pairs = 300;
  return o;
}

}  // namespace

TEST_CASE("log grid endpoints and density") {
  const auto g = log_grid(1e-3, 10.0, 10);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 10.0);
  CHECK(g.size() >= 41);
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("basic chain is ordered and Abel summation is exact") {
  for (double p : oracle::all_p()) {
    const auto fam = oracle::example(p);
    const auto s = build_scale(fam);
    const auto b = basic_chain(fam, s);
    CHECK(b.abel_exact);
    CHECK(b.lhs <= b.middle * (1 + 1e-12));
    CHECK(b.middle <= b.rhs);
    CHECK(verify_basic(fam, s).status == Status::Pass);
  }
}

TEST_CASE("suite on p = 2 passes every check") {
  const auto fam = oracle::example(2.0);
  const auto s = build_scale(fam);
  const auto y = build_from_family(fam);
  const auto rep = run_suite({&y, &fam, &s}, quick(), 2);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.status != Status::Fail);
  }
  CHECK(rep.all_passed());
  REQUIRE(rep.find("moderate") != nullptr);
  CHECK(rep.find("moderate")->constant <= 3.0 + 1e-9);
  CHECK(rep.find("small_x")->status == Status::Skip);

  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j.at("checks").size() == rep.checks.size());
  CHECK(j["checks"][0].contains("anchor"));
  CHECK(rep.to_table().find("moderate") != std::string::npos);
}

TEST_CASE("suite is independent of the worker count") {
  const auto fam = oracle::example(3.0);
  const auto s = build_scale(fam);
  const auto y = build_from_family(fam);
  CHECK(run_suite({&y, &fam, &s}, quick(), 1).to_json() == run_suite({&y, &fam, &s}, quick(), 4).to_json());
}

TEST_CASE("family checks are skipped without a family") {
  const auto y = build_from_family(oracle::example(2.0));
  const auto rep = run_suite({&y, nullptr, nullptr}, quick());
  CHECK(rep.find("basic_chain")->status == Status::Skip);
  CHECK(rep.find("ui_improvement")->status == Status::Skip);
}

TEST_CASE("small-x identities and their negative control") {
  for (double p : {0.5, 1.0, 1.5}) {
    const auto y = build_from_family(oracle::example(p));
    CHECK(verify_small_x(y, quick()).status == Status::Pass);
    CHECK(verify_small_x(y, quick(), x0_q(p).q + 0.5).status == Status::Fail);
    CHECK(verify_moderate(y, quick()).constant == doctest::Approx(x0_q(p).q + 1).epsilon(1e-10));
  }
  CHECK(verify_power_join().status == Status::Pass);
}

TEST_CASE("the convex 5/4 joint is detected by the gap check") {
  // Upsilon-hat bends upward at 5/4 for p < 2, so smoothing lifts Upsilon above its hat there.
  const auto y = build_from_family(oracle::example(1.0));
  const auto c = verify_mollification_gap(y, quick());
  CHECK(c.status == Status::Fail);
  REQUIRE(c.witness_x);
  CHECK(std::abs(*c.witness_x - 1.25) <= y.epsilon());

  const auto z = build_from_family(oracle::example(2.0));
  CHECK(verify_mollification_gap(z, quick()).status == Status::Pass);
}

TEST_CASE("individual checks on p = 3") {
  const auto fam = oracle::example(3.0);
  const auto y = build_from_family(fam);
  CHECK(verify_second_derivative(y, quick()).status == Status::Pass);
  CHECK(verify_submultiplicative(y, quick()).status == Status::Pass);
  CHECK(verify_finally_decreasing(y, quick()).status != Status::Fail);
  CHECK(verify_equivalence(y).status == Status::Pass);
  CHECK(verify_ui_improvement(fam, y, default_radii(fam)).status == Status::Pass);
  const auto radii = default_radii(fam);
  CHECK(radii.front() == 0.0);
  CHECK(radii.back() > fam.max_radius());
}
