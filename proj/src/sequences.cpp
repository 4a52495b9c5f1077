#include "youngfn/sequences.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "youngfn/errors.hpp"

namespace youngfn {

void ScaleSequence::validate() const {
  if (d.size() != c.size() || c.empty()) throw ConstructionError("d and c must have equal length");
  if (c.front() != 1) throw ConstructionError("c_1 must be 1");
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!(d[i + 1] < d[i])) throw ConstructionError("d must be strictly decreasing");
    if (c[i + 1] < 2 * c[i]) throw ConstructionError("c violates the doubling property");
  }
}

std::vector<double> build_d(double tail_at_1, int n_max) {
  if (n_max < 2) throw DomainError("horizon must be at least 2");
  if (!(tail_at_1 >= 0.0)) throw DomainError("tail value must be non-negative");
  const double d1 = std::max(2.0 * tail_at_1, 1.0);
  std::vector<double> d(static_cast<std::size_t>(n_max));
  for (int n = 0; n < n_max; ++n) d[n] = std::ldexp(d1, -n);
  return d;
}

std::vector<std::uint64_t> choose_c(const std::function<double(double)>& tail,
                                    const std::vector<double>& d, int n_max) {
  if (n_max < 1 || d.size() < static_cast<std::size_t>(n_max))
    throw DomainError("d must cover the horizon");
  if (!(tail(1.0) < d[0])) throw DomainError("tail(1) must be below d_1");

  constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max();
  auto admissible = [&](std::uint64_t k, double dn) { return tail(static_cast<double>(k)) < dn; };

  std::vector<std::uint64_t> c{1};
  for (int n = 1; n < n_max; ++n) {
    const std::uint64_t prev = c.back();
    if (prev > kCap / 2) throw ConstructionError("c sequence exceeds the 64-bit search cap");
    const std::uint64_t lo = 2 * prev;
    const double dn = d[n];
    if (admissible(lo, dn)) {
      c.push_back(lo);
      continue;
    }
    // Gallop to an admissible upper bound, then bisect; tail is non-increasing.
    std::uint64_t bad = lo;
    std::uint64_t good = 0;
    std::uint64_t step = 1;
    while (good == 0) {
      if (bad > kCap - step) {
        std::ostringstream os;
        os << "no admissible c_" << n + 1 << " below 2^64-1; the tail does not decay";
        throw ConstructionError(os.str());
      }
      const std::uint64_t probe = bad + step;
      if (admissible(probe, dn)) {
        good = probe;
      } else {
        bad = probe;
        step = step > kCap / 2 ? kCap : 2 * step;
      }
    }
    while (good - bad > 1) {
      const std::uint64_t mid = bad + (good - bad) / 2;
      if (admissible(mid, dn))
        good = mid;
      else
        bad = mid;
    }
    c.push_back(good);
  }
  return c;
}

ScaleSequence build_scale(const MeasureFamily& family, int n_max) {
  ScaleSequence s;
  s.d = build_d(p_tail(family, 1.0), n_max);
  s.c = choose_c([&](double k) { return p_tail(family, k); }, s.d, n_max);
  s.validate();
  return s;
}

std::uint64_t upsilon_count(const std::vector<std::uint64_t>& c, std::uint64_t k) {
  std::uint64_t n = 0;
  for (auto ci : c) {
    if (ci > k) break;
    ++n;
  }
  return n;
}

BigInt upsilon_cumulative(const std::vector<std::uint64_t>& c, std::uint64_t m) {
  // upsilon_q = n on [c_n, c_{n+1}); beyond c_N it is N until c_{N+1} >= 2 c_N.
  BigInt sum = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::uint64_t from = c[i];
    if (from > m) break;
    const std::uint64_t next_minus_one =
        i + 1 < c.size() ? c[i + 1] - 1 : std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t to = std::min(m, next_minus_one);
    sum += BigInt(i + 1) * (BigInt(to) - from + 1);
  }
  return sum;
}

double BasicYoung::domain_end() const { return 2.0 * static_cast<double>(c_.back()); }

double BasicYoung::derivative(double x) const {
  if (!(x >= 0.0)) throw DomainError("argument must be non-negative");
  if (x >= domain_end()) throw RangeError("argument beyond the stored c horizon");
  return static_cast<double>(upsilon_count(c_, static_cast<std::uint64_t>(std::floor(x))));
}

double BasicYoung::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("argument must be non-negative");
  if (x >= domain_end()) throw RangeError("argument beyond the stored c horizon");
  const double fl = std::floor(x);
  const auto m = static_cast<std::uint64_t>(fl);
  // integral over [0, m) is sum_{j<m} upsilon_j = cumulative(m - 1)
  const double whole = m == 0 ? 0.0 : upsilon_cumulative(c_, m - 1).convert_to<double>();
  return whole + static_cast<double>(upsilon_count(c_, m)) * (x - fl);
}

}  // namespace youngfn
