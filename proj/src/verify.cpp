#include "youngfn/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "youngfn/errors.hpp"
#include "youngfn/format.hpp"

namespace youngfn {

using boost::multiprecision::cpp_rational;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string f(double v) { return format_double(v); }

Check make(std::string name, std::string anchor) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  return c;
}

Check skipped(std::string name, std::string anchor, std::string why) {
  Check c = make(std::move(name), std::move(anchor));
  c.status = Status::Skip;
  c.threshold = kInf;
  c.detail = std::move(why);
  return c;
}

cpp_rational exact(double v) {
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  cpp_rational r(mant);
  e -= 53;
  const boost::multiprecision::cpp_int two_pow = boost::multiprecision::cpp_int(1) << std::abs(e);
  if (e >= 0) return cpp_rational(r * two_pow);
  return cpp_rational(r / two_pow);
}

double q_of(const YoungFunction& y) { return x0_q(y.p()).q; }

// Windows of half-width eps around the smoothed knots, within [lo, hi].
void add_window_points(const YoungFunction& y, double lo, double hi, int per_window,
                       std::vector<double>& out) {
  const double eps = y.epsilon();
  for (const auto& k : y.windows()) {
    if (k.x - eps < lo || k.x + eps > hi) continue;
    for (int j = 0; j <= per_window; ++j) out.push_back(k.x - eps + 2.0 * eps * j / per_window);
    out.push_back(k.x);
  }
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool non_increasing(double next, double prev, double rel_tol) {
  return next <= prev + rel_tol * std::abs(prev);
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
  }
  return "?";
}

bool VerificationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == Status::Fail; });
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["status"] = status_name(c.status);
    j["constant"] = f(c.constant);
    j["threshold"] = f(c.threshold);
    if (c.witness_x) {
      nlohmann::ordered_json w = nlohmann::ordered_json::array({f(*c.witness_x)});
      if (c.witness_y) w.push_back(f(*c.witness_y));
      j["witness"] = w;
    } else {
      j["witness"] = nullptr;
    }
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  nlohmann::ordered_json root;
  root["checks"] = arr;
  return root.dump(1) + "\n";
}

std::string VerificationReport::to_table() const {
  std::ostringstream os;
  os << std::left << std::setw(24) << "check" << std::setw(8) << "status" << std::setw(26)
     << "constant" << std::setw(26) << "threshold" << "witness\n";
  for (const auto& c : checks) {
    std::string w = "-";
    if (c.witness_x) w = f(*c.witness_x) + (c.witness_y ? ", " + f(*c.witness_y) : "");
    os << std::setw(24) << c.name << std::setw(8) << status_name(c.status) << std::setw(26)
       << f(c.constant) << std::setw(26) << f(c.threshold) << w << "\n";
    if (!c.detail.empty()) os << "    " << c.detail << "\n";
  }
  return os.str();
}

std::vector<double> log_grid(double a, double b, int per_decade) {
  if (!(a > 0.0) || !(b >= a) || per_decade < 1) throw DomainError("log_grid needs 0 < a <= b");
  if (a == b) return {a};
  const double la = std::log(a), lb = std::log(b);
  const auto n = static_cast<std::size_t>(std::ceil((lb - la) / std::log(10.0) * per_decade));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = std::exp(la + (lb - la) * double(i) / double(n));
  out.front() = a;
  out.back() = b;
  return out;
}

double grid_end(const YoungFunction& y, const VerifyOptions& opts) {
  const auto& c = y.c();
  const std::size_t idx = std::min<std::size_t>(opts.top_index, c.size()) - 1;
  if (c[idx] >= static_cast<std::uint64_t>(kHorizonLog2Guard)) return y.horizon();
  return std::min(std::ldexp(1.0, static_cast<int>(c[idx])), y.horizon());
}

std::vector<double> verification_grid(const YoungFunction& y, const VerifyOptions& opts) {
  const double end = grid_end(y, opts);
  std::vector<double> g = log_grid(opts.x_min, end, opts.per_decade);
  add_window_points(y, opts.x_min, end, opts.window_points, g);
  for (const auto& k : y.derivative().kinks())
    if (k.x <= end) g.push_back(k.x);
  sort_unique(g);
  return g;
}

// ---------------------------------------------------------------------------------------
// de La Vallee Poussin chain

BasicChain basic_chain(const MeasureFamily& family, const ScaleSequence& scale) {
  BasicChain out;
  const BasicYoung basic(scale.c);
  const double p = family.p();
  for (double d : scale.d) out.rhs += d;

  for (const auto& member : family.members()) {
    double lhs = 0.0;
    cpp_rational per_atom = 0;
    std::vector<std::pair<std::uint64_t, cpp_rational>> levels;  // (floor r^p, w)
    for (const auto& a : member.atoms()) {
      const double rp = std::pow(a.radius, p);
      if (rp < 1.0) continue;
      if (rp > basic.domain_end()) throw RangeError("atom beyond the determined range of the basic function");
      lhs += a.weight * basic(rp);
      const auto fl = static_cast<std::uint64_t>(std::floor(rp));
      const cpp_rational w = exact(a.weight);
      per_atom += w * cpp_rational(upsilon_cumulative(scale.c, fl));
      levels.emplace_back(fl, w);
    }

    // Blocks of n on which both upsilon_n and m(|z|^p >= n) are constant.
    std::set<std::uint64_t> cuts{1};
    std::uint64_t top = 0;
    for (auto c : scale.c) cuts.insert(c);
    for (const auto& [fl, w] : levels) {
      cuts.insert(fl + 1);
      top = std::max(top, fl);
    }
    cpp_rational blocks = 0;
    for (auto it = cuts.begin(); it != cuts.end(); ++it) {
      const std::uint64_t a = *it;
      if (a > top) break;
      auto nx = std::next(it);
      const std::uint64_t b = std::min<std::uint64_t>(nx == cuts.end() ? top + 1 : *nx, top + 1);
      cpp_rational mass = 0;
      for (const auto& [fl, w] : levels)
        if (fl >= a) mass += w;
      blocks += mass * upsilon_count(scale.c, a) * (b - a);
    }

    if (per_atom != blocks) out.abel_exact = false;
    out.lhs = std::max(out.lhs, lhs);
    out.middle = std::max(out.middle, static_cast<double>(blocks));
  }
  return out;
}

Check verify_basic(const MeasureFamily& family, const ScaleSequence& scale) {
  Check c = make("basic_chain", "basic Young moment <= counting sum <= sum of d_n");
  try {
    const BasicChain ch = basic_chain(family, scale);
    c.constant = ch.middle;
    c.threshold = ch.rhs;
    const bool ordered = ch.lhs <= ch.middle * (1.0 + 1e-12) && ch.middle <= ch.rhs;
    const bool finite = std::isfinite(ch.lhs) && std::isfinite(ch.middle) && std::isfinite(ch.rhs);
    c.status = ordered && finite && ch.abel_exact ? Status::Pass : Status::Fail;
    c.detail = "lhs=" + f(ch.lhs) + " middle=" + f(ch.middle) + " rhs=" + f(ch.rhs) +
               " abel_exact=" + (ch.abel_exact ? "true" : "false");
  } catch (const std::exception& e) {
    c.status = Status::Fail;
    c.detail = e.what();
  }
  return c;
}

// ---------------------------------------------------------------------------------------
// Growth of Upsilon

std::pair<double, double> moderate_constant(const YoungFunction& y, const VerifyOptions& opts) {
  double best = 0.0, at = 0.0;
  for (double x : verification_grid(y, opts)) {
    const double r = x * y.d1(x) / y(x);
    if (!(r <= best)) {
      best = r;
      at = x;
    }
  }
  return {best, at};
}

Check verify_moderate(const YoungFunction& y, const VerifyOptions& opts) {
  Check c = make("moderate", "moderate growth: sup x Upsilon'(x)/Upsilon(x) finite");
  const double p = y.p();
  const auto grid = verification_grid(y, opts);
  const auto [cbar, at] = moderate_constant(y, opts);
  c.constant = cbar;
  c.witness_x = at;
  c.threshold = (p >= 2.0 ? 3.0 : std::max(3.0, q_of(y) + 1.0)) + 1e-9;
  bool ok = std::isfinite(cbar) && cbar <= c.threshold && cbar >= 1.0;
  std::ostringstream d;

  if (p < 2.0) {
    const auto [x0, q] = x0_q(p);
    double worst = 0.0;
    for (double x : grid) {
      if (x > x0) break;
      const double dev = std::abs(x * y.d1(x) / y(x) - (q + 1.0));
      if (dev > worst) worst = dev;
    }
    d << "power region deviation from q+1=" << f(q + 1.0) << ": " << f(worst) << "; ";
    if (!(worst <= 1e-10)) ok = false;
  }

  const double end = grid.back();
  for (double lam : {2.0, 5.0, 10.0}) {
    const double factor = std::pow(lam, cbar);
    for (double x : grid) {
      if (lam * x > end) break;
      const double lhs = y(lam * x);
      if (!(lhs <= factor * y(x) * (1.0 + 1e-12))) {
        if (ok) c.witness_x = x;
        ok = false;
        d << "scaling fails for lambda=" << f(lam) << " at x=" << f(x) << "; ";
        break;
      }
    }
  }
  d << "grid points " << grid.size();
  c.detail = d.str();
  c.status = ok ? Status::Pass : Status::Fail;
  return c;
}

Check verify_second_derivative(const YoungFunction& y, const VerifyOptions& opts) {
  Check c = make("second_derivative",
                 "0 < x Upsilon''(x) bounded; Upsilon'' finally non-increasing");
  const double p = y.p();
  const auto grid = verification_grid(y, opts);
  constexpr double kMonoTol = 1e-10;
  bool ok = true;
  double worst = 0.0, worst_at = 0.0;
  std::vector<double> l2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    l2[i] = y.d2_log2(x);
    if (!(std::isfinite(l2[i]) && y.d2(x) >= 0.0)) {
      if (ok) c.witness_x = x;
      ok = false;
    }
    const double v = x * y.d2(x);
    if (v > worst) {
      worst = v;
      worst_at = x;
    }
  }
  c.constant = worst;
  c.threshold = p >= 2.0 ? 2.0 + 1e-9 : kInf;
  if (!(worst <= c.threshold)) {
    ok = false;
    c.witness_x = worst_at;
  }

  // Last grid index from which log2 Upsilon'' never increases.
  std::size_t start = grid.size() - 1;
  while (start > 0 && non_increasing(l2[start], l2[start - 1], kMonoTol)) --start;
  const double mono_from = grid[start];
  std::ostringstream d;
  d << "x Upsilon'' max at " << f(worst_at) << "; Upsilon'' non-increasing from x=" << f(mono_from)
    << " to " << f(grid.back());
  if (p >= 2.0) {
    if (mono_from > 2.0) {
      ok = false;
      d << " (required from x=2)";
      if (!c.witness_x) c.witness_x = mono_from;
    }
  } else {
    if (!(mono_from <= grid.back() / 2.0)) ok = false;
    d << " (threshold reported)";
  }
  c.detail = d.str();
  c.status = ok ? Status::Pass : Status::Fail;
  return c;
}

Check verify_submultiplicative(const YoungFunction& y, const VerifyOptions& opts) {
  Check c = make("submultiplicative",
                 "finally submultiplicative: hat(xy) <= 2 hat(x) hat(y) on dyadic knots beyond 2^{c_2}");
  const auto& cs = y.c();
  const double log2h = std::log2(y.horizon());
  const auto& hat = y.derivative();
  bool dyadic_ok = true;
  double worst = 0.0;
  std::size_t pairs = 0;
  // m, k are 1-based indices >= 2; cs is 0-based.
  for (std::size_t m = 2; m < cs.size(); ++m) {
    for (std::size_t k = m; k < cs.size(); ++k) {
      const std::uint64_t e = cs[m] + cs[k];  // c_{m+1} + c_{k+1}
      if (double(e) > log2h) break;
      ++pairs;
      const double lhs = hat(std::ldexp(1.0, static_cast<int>(e)));
      const double hx = hat(std::ldexp(1.0, static_cast<int>(cs[m - 1])));
      const double hy = hat(std::ldexp(1.0, static_cast<int>(cs[k - 1])));
      const double ratio = lhs / (hx * hy);
      if (ratio > worst) worst = ratio;
      if (!(lhs <= 2.0 * hx * hy)) {
        if (dyadic_ok) {
          c.witness_x = std::ldexp(1.0, static_cast<int>(cs[m - 1]));
          c.witness_y = std::ldexp(1.0, static_cast<int>(cs[k - 1]));
        }
        dyadic_ok = false;
      }
    }
  }
  c.constant = worst;
  c.threshold = 2.0;

  // Empirical K over x = 2^{c_2 + i/k}, y = 2^{c_2 + j/k} with xy inside the horizon.
  const int per = opts.pair_points_per_octave;
  const double base = double(cs[1]);
  const auto n = static_cast<std::size_t>(std::floor((log2h - 2.0 * base) * per));
  double k_emp = 0.0;
  std::optional<std::pair<double, double>> k_at;
  if (2.0 * base <= log2h) {
    std::vector<double> single(n + 1), product(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      single[i] = y(std::exp2(base + double(i) / per));
      product[i] = y(std::exp2(2.0 * base + double(i) / per));
    }
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = i; i + j <= n; ++j) {
        const double r = product[i + j] / (single[i] * single[j]);
        if (r > k_emp) {
          k_emp = r;
          k_at = {std::exp2(base + double(i) / per), std::exp2(base + double(j) / per)};
        }
      }
  }
  if (dyadic_ok && k_at) {
    c.witness_x = k_at->first;
    c.witness_y = k_at->second;
  }
  c.status = dyadic_ok && std::isfinite(k_emp) ? Status::Pass : Status::Fail;
  c.detail = "dyadic pairs " + std::to_string(pairs) + "; empirical K_Upsilon=" + f(k_emp) +
             " from R=2^" + std::to_string(cs[1]);
  return c;
}

Check verify_small_x(const YoungFunction& y, const VerifyOptions& opts, std::optional<double> q_override) {
  const char* anchor = "small-x exactness: Upsilon'(x^p) x^{p-2} = x^2, Upsilon''(x^p) x^{2p-2} = q x^2";
  const double p = y.p();
  if (p >= 2.0) return skipped("small_x", anchor, "only for p < 2");
  Check c = make("small_x", anchor);
  const auto [x0, q_true] = x0_q(p);
  const double q = q_override.value_or(q_true);
  const double top = std::pow(x0, 1.0 / p);
  const auto grid = log_grid(opts.x_min, top * (1.0 - 1e-9), opts.per_decade);
  double worst = 0.0;
  for (double x : grid) {
    const double xp = std::pow(x, p);
    const double a = y.d1(xp) * std::pow(x, p - 2.0);
    const double b = y.d2(xp) * std::pow(x, 2.0 * p - 2.0);
    const double ea = std::abs(a - x * x) / (x * x);
    const double eb = std::abs(b - q * x * x) / (q * x * x);
    const double e = std::max(ea, eb);
    if (!(e <= worst)) {
      worst = e;
      c.witness_x = x;
    }
  }
  c.constant = worst;
  c.threshold = 1e-12;
  c.status = worst <= 1e-12 ? Status::Pass : Status::Fail;
  c.detail = "q=" + f(q) + " on (0, " + f(top) + "), relative error";
  return c;
}

Check verify_power_join(int points) {
  Check c = make("power_join", "x0: derivative of x^q equals 1/6, x0 decreasing in p");
  double worst = 0.0;
  double prev = kInf;
  bool ok = true;
  for (int i = 1; i <= points; ++i) {
    const double p = 2.0 * i / (points + 1);
    const auto [x0, q] = x0_q(p);
    const double dev = std::abs(q * std::pow(x0, q - 1.0) - 1.0 / 6.0);
    if (dev > worst) {
      worst = dev;
      c.witness_x = p;
    }
    if (!(x0 > 0.0 && x0 < 1.0 && x0 < prev)) {
      ok = false;
      c.witness_x = p;
    }
    prev = x0;
  }
  c.constant = worst;
  c.threshold = 1e-10;
  c.status = ok && worst <= 1e-10 ? Status::Pass : Status::Fail;
  c.detail = std::to_string(points) + " values of p in (0, 2); x0 -> 1 as p -> 0, x0 -> 0 as p -> 2";
  return c;
}

Check verify_finally_decreasing(const YoungFunction& y, const VerifyOptions& opts) {
  const char* anchor = "finally decreasing: Upsilon'(x^p) x^{p-2} (p >= 1), Upsilon'(x^p) x^{p-1} (p < 1)";
  const double p = y.p();
  if (p >= 2.0) return skipped("finally_decreasing", anchor, "only for p < 2");
  Check c = make("finally_decreasing", anchor);
  // In the variable y = x^p: Upsilon'(y) y^e.
  const double e = p >= 1.0 ? 1.0 - 2.0 / p : 1.0 - 1.0 / p;
  const double lo = std::ldexp(1.0, static_cast<int>(y.c()[1]));
  const double hi = y.horizon();
  auto h = [&](double t) { return y.d1(t) * std::pow(t, e); };
  constexpr double kTol = 1e-12;

  const auto grid = log_grid(lo, hi, opts.per_decade);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = h(grid[i]);
  std::size_t start = grid.size() - 1;
  while (start > 0 && non_increasing(v[start], v[start - 1], kTol)) --start;
  const double from = grid[start];
  c.constant = from;
  c.threshold = hi / 2.0;
  c.witness_x = from;
  bool ok = from <= hi / 2.0;

  if (ok) {
    const auto fine = log_grid(from, hi, 2 * opts.per_decade);
    double prev = h(fine.front());
    for (std::size_t i = 1; i < fine.size(); ++i) {
      const double cur = h(fine[i]);
      if (!non_increasing(cur, prev, kTol)) {
        ok = false;
        c.witness_x = fine[i];
        break;
      }
      prev = cur;
    }
  }
  c.status = ok ? Status::Pass : Status::Fail;
  c.detail = "monotone from x*=" + f(from) + " (in the variable x^p) to horizon " + f(hi);
  return c;
}

Check verify_mollification_gap(const YoungFunction& y, const VerifyOptions& opts) {
  Check c = make("mollification_gap", "0 <= hat - smoothed < 2^-4, maximal at the knot");
  std::vector<double> grid = verification_grid(y, opts);
  add_window_points(y, 0.0, y.horizon(), opts.window_points, grid);
  sort_unique(grid);

  double lo = kInf, hi = -kInf, lo_at = 0.0, hi_at = 0.0;
  for (double x : grid) {
    const double g = y.hat(x) - y.d1(x);
    if (g < lo) {
      lo = g;
      lo_at = x;
    }
    if (g > hi) {
      hi = g;
      hi_at = x;
    }
  }
  bool ok = lo >= 0.0 && hi < 0.0625;
  c.constant = hi;
  c.threshold = 0.0625;
  c.witness_x = lo < 0.0 ? lo_at : hi_at;

  const double eps = y.epsilon();
  const double spacing = 2.0 * eps / opts.window_points;
  std::size_t bad_windows = 0;
  std::optional<double> first_bad;
  for (const auto& k : y.windows()) {
    if (k.x + eps > y.horizon()) continue;
    double best = -kInf, best_at = k.x;
    for (int j = 0; j <= opts.window_points; ++j) {
      const double x = k.x - eps + 2.0 * eps * j / opts.window_points;
      const double g = y.hat(x) - y.d1(x);
      if (g > best) {
        best = g;
        best_at = x;
      }
    }
    const double at_knot = y.hat(k.x) - y.d1(k.x);
    const double ulp = std::nextafter(y.hat(k.x), kInf) - y.hat(k.x);
    const bool at_knot_max = at_knot >= best - 4.0 * ulp || std::abs(best_at - k.x) <= spacing;
    if (!at_knot_max) {
      ++bad_windows;
      if (!first_bad) first_bad = k.x;
    }
  }
  if (bad_windows) {
    ok = false;
    if (lo >= 0.0) c.witness_x = *first_bad;
  }
  c.status = ok ? Status::Pass : Status::Fail;
  c.detail = "gap range [" + f(lo) + ", " + f(hi) + "] on " + std::to_string(grid.size()) +
             " points; windows without maximum at the knot: " + std::to_string(bad_windows) +
             (first_bad ? " (first at " + f(*first_bad) + ")" : "");
  return c;
}

Check verify_growth_bounds(const YoungFunction& y, const VerifyOptions& opts) {
  Check c = make("growth_bounds",
                 "quasi-subadditivity and the derivative product bounds");
  const double p = y.p();
  const auto [cbar, cbar_at] = moderate_constant(y, opts);
  (void)cbar_at;
  const double end = grid_end(y, opts);
  const double factor = std::pow(2.0, cbar - 1.0);
  bool ok = std::isfinite(cbar);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(std::log(opts.x_min), std::log(end / 2.0));
  double sub = 0.0;
  for (int i = 0; i < opts.random_pairs; ++i) {
    const double s = std::exp(u(rng));
    const double t = i % 16 == 0 ? s : std::exp(u(rng));
    const double r = y(s + t) / (y(s) + y(t));
    if (r > sub) sub = r;
    if (!(y(s + t) <= factor * (y(s) + y(t)) * (1.0 + 1e-12))) {
      if (ok) {
        c.witness_x = s;
        c.witness_y = t;
      }
      ok = false;
    }
  }

  // Products in the variable v = w^p: w^{p-2} = v^{1-2/p}, w^{p-1} = v^{1-1/p}, w^{2p-2} = v^{2-2/p}.
  const double a = 1.0 - 2.0 / p, b = 1.0 - 1.0 / p, d2e = 2.0 - 2.0 / p;
  double cb = 0.0, cc = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (double v : verification_grid(y, opts)) {
    const double u1 = y.d1(v), u2 = y.d2(v), uv = y(v);
    const double pa = std::pow(v, a), pb = std::pow(v, b), pd = std::pow(v, d2e);
    cb = std::max(cb, u1 * (pa + pb + v) / (1.0 + uv));
    cc = std::max(cc, u2 * pd / (1.0 + (v >= 1.0 ? pa : 0.0)));
    s1 = std::max(s1, u1 * pa);
    s2 = std::max(s2, u1 * pb);
    s3 = std::max(s3, u2 * pd);
  }
  ok = ok && std::isfinite(cb) && std::isfinite(cc);
  std::ostringstream d;
  d << "c_bar=" << f(cbar) << " max Upsilon(s+t)/(Upsilon(s)+Upsilon(t))=" << f(sub)
    << " C_prime=" << f(cb) << " C_second=" << f(cc);
  if (p >= 1.0 && p < 2.0) {
    ok = ok && std::isfinite(s1) && std::isfinite(s3);
    d << " sup U'(w^p)w^{p-2}=" << f(s1) << " sup U''(w^p)w^{2p-2}=" << f(s3);
  } else if (p < 1.0) {
    ok = ok && std::isfinite(s2) && std::isfinite(s3);
    d << " sup U'(w^p)w^{p-1}=" << f(s2) << " sup U''(w^p)w^{2p-2}=" << f(s3);
  }
  c.constant = cb;
  c.threshold = kInf;
  c.detail = d.str();
  c.status = ok ? Status::Pass : Status::Fail;
  return c;
}

std::vector<double> default_radii(const MeasureFamily& family) {
  std::vector<double> r{0.0, 0.5};
  const double top = family.max_radius();
  for (double x = 1.0; x <= 2.0 * std::max(top, 1.0); x *= 2.0) r.push_back(x);
  return r;
}

Check verify_ui_improvement(const MeasureFamily& family, const YoungFunction& y,
                            const std::vector<double>& radii) {
  Check c = make("ui_improvement",
                 "Upsilon-moment tails decrease to 0; a second-level Young function exists");
  const double p = family.p();
  auto g = [&](double r) { return y(std::pow(r, p)); };
  std::ostringstream d;
  bool ok = true;
  try {
    double prev = kInf;
    const double top = family.max_radius();
    for (double r : radii) {
      const double v = integrate_sup(family, g, Region::radius_above(r));
      if (!(v <= prev)) {
        ok = false;
        c.witness_x = r;
      }
      if (r >= top && v != 0.0) {
        ok = false;
        c.witness_x = r;
      }
      prev = v;
    }
    const double total = integrate_sup(family, g, Region::all());
    c.constant = total;

    const MeasureFamily pushed = family.pushforward([&](double rp) { return y(rp); }, 1.0);
    const ScaleSequence scale2 = build_scale(pushed);
    BuildOptions bo;
    bo.theta = y.theta();
    const YoungFunction psi = build_from_family(pushed, bo);
    const BasicChain ch = basic_chain(pushed, scale2);
    const double second =
        integrate_sup(pushed, [&](double r) { return psi(r); }, Region::all());
    const bool chain_ok = ch.abel_exact && ch.lhs <= ch.middle * (1.0 + 1e-12) && ch.middle <= ch.rhs;
    ok = ok && chain_ok && std::isfinite(second);
    c.threshold = kInf;
    d << "sup Upsilon-moment=" << f(total) << "; second level: sup Psi(Upsilon)-moment=" << f(second)
      << " chain lhs=" << f(ch.lhs) << " middle=" << f(ch.middle) << " rhs=" << f(ch.rhs)
      << " abel_exact=" << (ch.abel_exact ? "true" : "false");
  } catch (const std::exception& e) {
    ok = false;
    d << e.what();
  }
  c.detail = d.str();
  c.status = ok ? Status::Pass : Status::Fail;
  return c;
}

Check verify_equivalence(const YoungFunction& y) {
  Check c = make("equivalence", "hat/smoothed -> 1; hat integral sandwiches Upsilon");
  const auto& cs = y.c();
  const double h = y.horizon();
  std::vector<double> knots;
  for (std::size_t n = 1; n < cs.size(); ++n)
    if (cs[n] <= static_cast<std::uint64_t>(kHorizonLog2Guard) &&
        std::ldexp(1.0, static_cast<int>(cs[n])) <= h)
      knots.push_back(std::ldexp(1.0, static_cast<int>(cs[n])));

  // Ratio at 2^{c_4}, 2^{c_5}; the two largest in-horizon knots stand in when those lie beyond.
  std::vector<double> ratio_at;
  for (std::size_t n : {3u, 4u})
    if (n < cs.size() && n - 1 < knots.size()) ratio_at.push_back(knots[n - 1]);
  if (ratio_at.size() < 2 && !knots.empty()) {
    ratio_at.clear();
    for (std::size_t i = knots.size() >= 2 ? knots.size() - 2 : 0; i < knots.size(); ++i)
      ratio_at.push_back(knots[i]);
  }
  bool ok = true;
  double worst = 0.0;
  for (double x : ratio_at) {
    const double r = y.hat(x) / y.d1(x);
    worst = std::max(worst, r - 1.0);
    if (!(r >= 1.0 && r <= 1.0 + 1e-3)) {
      ok = false;
      c.witness_x = x;
    }
  }
  std::size_t sandwich = 0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double x = knots[i];
    const double delta = 0.0625 * x / y.hat(x / 2.0);
    const double up = y(x);
    const double upper = y.hat_integral(x);
    const double lower = y.hat_integral(x - delta);
    ++sandwich;
    if (!(lower <= up * (1.0 + 1e-12) && up <= upper * (1.0 + 1e-12))) {
      ok = false;
      c.witness_x = x;
    }
  }
  c.constant = worst;
  c.threshold = 1e-3;
  std::ostringstream d;
  d << "ratio checked at";
  for (double x : ratio_at) d << " " << f(x);
  d << "; sandwich at " << sandwich << " knots";
  c.detail = d.str();
  c.status = ok && !ratio_at.empty() ? Status::Pass : Status::Fail;
  return c;
}

// ---------------------------------------------------------------------------------------

VerificationReport run_suite(const SuiteInputs& in, const VerifyOptions& opts, unsigned jobs) {
  if (!in.young) throw ValidationError("run_suite needs a Young function");
  const YoungFunction& y = *in.young;
  std::vector<std::function<Check()>> tasks;
  if (in.family && in.scale) {
    tasks.push_back([&] { return verify_basic(*in.family, *in.scale); });
  } else {
    tasks.push_back([] {
      return skipped("basic_chain", "basic Young moment <= counting sum <= sum of d_n",
                     "no measure family supplied");
    });
  }
  tasks.push_back([&] { return verify_moderate(y, opts); });
  tasks.push_back([&] { return verify_second_derivative(y, opts); });
  tasks.push_back([&] { return verify_submultiplicative(y, opts); });
  tasks.push_back([&] { return verify_small_x(y, opts); });
  tasks.push_back([&] {
    return y.p() < 2.0 ? verify_power_join()
                       : skipped("power_join", "x0: derivative of x^q equals 1/6, x0 decreasing in p",
                                 "only for p < 2");
  });
  tasks.push_back([&] { return verify_finally_decreasing(y, opts); });
  tasks.push_back([&] { return verify_mollification_gap(y, opts); });
  tasks.push_back([&] { return verify_growth_bounds(y, opts); });
  if (in.family) {
    tasks.push_back([&] { return verify_ui_improvement(*in.family, y, default_radii(*in.family)); });
  } else {
    tasks.push_back([] {
      return skipped("ui_improvement",
                     "Upsilon-moment tails decrease to 0; a second-level Young function exists",
                     "no measure family supplied");
    });
  }
  tasks.push_back([&] { return verify_equivalence(y); });

  std::vector<Check> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (const std::exception& e) {
        results[i] = make("internal", "check raised an exception");
        results[i].status = Status::Fail;
        results[i].detail = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return {std::move(results)};
}

}  // namespace youngfn
