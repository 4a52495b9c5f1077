#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "youngfn/measures.hpp"

namespace youngfn {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultHorizon = 12;

/// Summable sequence d_n and doubling index sequence c_n (1-based in the maths,
/// stored 0-based here: c[0] is c_1).
struct ScaleSequence {
  std::vector<double> d;
  std::vector<std::uint64_t> c;

  std::size_t horizon() const { return c.size(); }
  /// Throws ConstructionError if an invariant is violated.
  void validate() const;
};

/// d_1 = max(2 tail_at_1, 1), d_n = d_1 2^{1-n}.
std::vector<double> build_d(double tail_at_1, int n_max);

/// Greedy doubling choice: c_1 = 1, c_{n+1} is the smallest integer
/// k >= max(2 c_n, c_n + 1) with tail(k) < d_{n+1}.
std::vector<std::uint64_t> choose_c(const std::function<double(double)>& tail,
                                    const std::vector<double>& d, int n_max);

/// d and c for a measure family, using its p-tail.
ScaleSequence build_scale(const MeasureFamily& family, int n_max = kDefaultHorizon);

/// upsilon_k = #{n : c_n <= k}; upsilon_0 = 0.
std::uint64_t upsilon_count(const std::vector<std::uint64_t>& c, std::uint64_t k);

/// sum_{q=1}^{m} upsilon_q, exact.
BigInt upsilon_cumulative(const std::vector<std::uint64_t>& c, std::uint64_t m);

/// The piecewise-linear Young function with right derivative upsilon_n on [n, n+1).
class BasicYoung {
 public:
  explicit BasicYoung(std::vector<std::uint64_t> c) : c_(std::move(c)) {}

  /// Right derivative; 0 on [0, 1).
  double derivative(double x) const;
  double operator()(double x) const;
  /// Largest argument for which the stored horizon determines the function.
  double domain_end() const;

 private:
  std::vector<std::uint64_t> c_;
};

}  // namespace youngfn
