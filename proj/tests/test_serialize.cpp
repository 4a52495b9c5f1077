#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "youngfn/errors.hpp"
#include "youngfn/format.hpp"
#include "youngfn/young.hpp"

using namespace youngfn;
using nlohmann::json;

TEST_CASE("shortest decimal strings round-trip") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 2000; ++i) {
    double v;
    const std::uint64_t b = bits(rng);
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(std::isinf(parse_double("-inf")));
  CHECK_THROWS_AS(parse_double("1.5x"), ValidationError);
  CHECK_THROWS_AS(parse_double(""), ValidationError);
}

TEST_CASE("artifact round trip") {
  for (double p : {0.5, 2.0, 3.0}) {
    BuildOptions o;
    if (p == 3.0) o.theta = ThetaSpec::power(0.3);
    const auto y = build_from_family(oracle::example(p), o);
    const std::string text = serialize(y);
    const auto z = deserialize(text);
    CHECK(serialize(z) == text);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lx(std::log(1e-6), std::log(std::min(y.horizon(), 1e12)));
    for (int i = 0; i < 100; ++i) {
      const double x = std::exp(lx(rng));
      CHECK(z(x) == doctest::Approx(y(x)).epsilon(1e-14));
      CHECK(z.d1(x) == doctest::Approx(y.d1(x)).epsilon(1e-14));
      CHECK(z.d2(x) == doctest::Approx(y.d2(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("tampered artifacts are rejected") {
  const auto y = build_from_family(oracle::example(2.0));
  const json base = json::parse(serialize(y));

  auto rejects_integrity = [&](const std::function<void(json&)>& edit) {
    json j = base;
    edit(j);
    CHECK_THROWS_AS(deserialize(j.dump()), IntegrityError);
  };
  rejects_integrity([](json& j) { j["knot_cumulative"][3]["value"] = "1000"; });
  rejects_integrity([](json& j) { j["c"][2] = std::to_string(std::stoull(j["c"][2].get<std::string>()) + 1); });
  rejects_integrity([](json& j) { j["normalization"] = "2.5"; });
  rejects_integrity([](json& j) { j["segments"][1]["value_right"] = "0.75"; });

  auto rejects_shape = [&](const std::function<void(json&)>& edit) {
    json j = base;
    edit(j);
    CHECK_THROWS_AS(deserialize(j.dump()), ValidationError);
  };
  rejects_shape([](json& j) { j["version"] = 99; });
  rejects_shape([](json& j) { j.erase("c"); });
  rejects_shape([](json& j) { j["p"] = 2.0; });
  rejects_shape([](json& j) { j["theta"] = {{"kind", "cube"}}; });
  CHECK_THROWS_AS(deserialize("not json"), ValidationError);
}
