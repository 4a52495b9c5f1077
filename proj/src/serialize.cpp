#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "youngfn/errors.hpp"
#include "youngfn/format.hpp"
#include "youngfn/young.hpp"

namespace youngfn {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("malformed number '" + std::string(s) + "'");
  return v;
}

namespace {

constexpr int kArtifactVersion = 1;

std::string num(double v) { return format_double(v); }

double get_num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ValidationError(std::string("artifact field '") + key + "' must be a number string");
  return parse_double(j.at(key).get<std::string>());
}

json segment_json(const Segment& s) {
  return {{"kind", s.kind == Segment::Kind::Power ? "power" : "affine"},
          {"left", num(s.left)},
          {"right", num(s.right)},
          {"right_log2", s.right_log2},
          {"value_left", num(s.value_left)},
          {"value_right", num(s.value_right)},
          {"exponent", num(s.exponent)}};
}

Segment segment_from(const json& j) {
  Segment s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") s.kind = Segment::Kind::Power;
  else if (kind == "affine") s.kind = Segment::Kind::Affine;
  else throw ValidationError("unknown segment kind '" + kind + "'");
  s.left = get_num(j, "left");
  s.right = get_num(j, "right");
  s.right_log2 = j.at("right_log2").get<std::int64_t>();
  s.value_left = get_num(j, "value_left");
  s.value_right = get_num(j, "value_right");
  s.exponent = get_num(j, "exponent");
  return s;
}

}  // namespace

std::string serialize(const YoungFunction& y) {
  json j;
  j["version"] = kArtifactVersion;
  j["p"] = num(y.p());
  j["epsilon"] = num(y.epsilon());
  j["normalization"] = num(y.mollifier().normalization());
  if (y.theta().kind() == ThetaSpec::Kind::Sqrt) j["theta"] = {{"kind", "sqrt"}};
  else j["theta"] = {{"kind", "power"}, {"beta", num(y.theta().beta())}};
  json c = json::array();
  for (auto v : y.c()) c.push_back(std::to_string(v));
  j["c"] = c;
  j["horizon"] = num(y.horizon());
  json segs = json::array();
  for (const auto& s : y.derivative().segments()) segs.push_back(segment_json(s));
  j["segments"] = segs;
  json knots = json::array();
  for (const auto& k : y.knot_cumulative()) knots.push_back({{"x", num(k.x)}, {"value", num(k.value)}});
  j["knot_cumulative"] = knots;
  return j.dump(1);
}

YoungFunction deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("artifact is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version") || j.at("version") != kArtifactVersion)
      throw ValidationError("unsupported artifact version");
    const double p = get_num(j, "p");
    const double eps = get_num(j, "epsilon");
    const double norm = get_num(j, "normalization");
    const json& th = j.at("theta");
    const std::string tk = th.at("kind").get<std::string>();
    ThetaSpec theta = ThetaSpec::sqrt();
    if (tk == "power") theta = ThetaSpec::power(get_num(th, "beta"));
    else if (tk != "sqrt") throw ValidationError("unknown theta kind '" + tk + "'");

    std::vector<std::uint64_t> c;
    for (const auto& v : j.at("c")) {
      const std::string s = v.get<std::string>();
      std::uint64_t x = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("malformed c entry '" + s + "'");
      c.push_back(x);
    }
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) segs.push_back(segment_from(s));
    std::vector<KnotValue> knots;
    for (const auto& k : j.at("knot_cumulative")) knots.push_back({get_num(k, "x"), get_num(k, "value")});
    const double horizon = get_num(j, "horizon");

    PiecewiseDerivative hat(p, std::move(segs), horizon);
    // The stored derivative must be the one the stored (c, theta, p) generate.
    const PiecewiseDerivative expected = build_hat_upsilon(c, theta, p);
    if (expected.segments() != hat.segments() || expected.horizon() != hat.horizon())
      throw IntegrityError("segments are inconsistent with c, theta and p");

    const Mollifier fresh(eps);
    if (std::abs(fresh.normalization() - norm) > 1e-12 * norm)
      throw IntegrityError("mollifier normalisation does not match epsilon");
    YoungFunction y(p, theta, c, hat, Mollifier(eps, norm), std::move(knots));

    const YoungFunction rebuilt = build_young(expected, theta, c, eps);
    const auto& a = y.knot_cumulative();
    const auto& b = rebuilt.knot_cumulative();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i].value - b[i].value) > 1e-9 * std::max(1.0, std::abs(b[i].value)))
        throw IntegrityError("cumulative table is inconsistent with the derivative");
    return y;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("artifact is malformed: ") + e.what());
  } catch (const ConstructionError& e) {
    throw IntegrityError(std::string("artifact does not describe a valid construction: ") + e.what());
  }
}

}  // namespace youngfn
