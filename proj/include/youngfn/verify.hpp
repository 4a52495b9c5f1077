#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "youngfn/measures.hpp"
#include "youngfn/sequences.hpp"
#include "youngfn/young.hpp"

namespace youngfn {

enum class Status { Pass, Fail, Skip };

const char* status_name(Status s);

struct Check {
  std::string name;
  std::string anchor;  // the property being certified
  Status status = Status::Pass;
  double constant = 0.0;   // empirical value
  double threshold = 0.0;  // bound it is compared against (inf when only reported)
  std::optional<double> witness_x;
  std::optional<double> witness_y;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool all_passed() const;
  const Check* find(const std::string& name) const;
  std::string to_json() const;
  std::string to_table() const;
};

struct VerifyOptions {
  int per_decade = 512;         // log-grid density for ratio checks
  int window_points = 64;       // extra points across each smoothing window
  double x_min = 1e-6;
  int top_index = 6;            // grids end at min(2^{c_top}, horizon)
  int pair_points_per_octave = 16;
  int random_pairs = 2000;
  std::uint64_t seed = 0x5eed0f1a2b3c4d5eULL;
};

/// Sorted log grid on [a, b] with `per_decade` points per decade; both ends included.
std::vector<double> log_grid(double a, double b, int per_decade);

/// The ratio-check grid: log grid on [x_min, min(2^{c_top}, horizon)] plus the knots and
/// `window_points` evenly spaced points across every smoothing window inside that range.
std::vector<double> verification_grid(const YoungFunction& y, const VerifyOptions& opts = {});

/// End of the verification range.
double grid_end(const YoungFunction& y, const VerifyOptions& opts = {});

struct BasicChain {
  double lhs = 0.0;     // sup_a int_{|z|>=1} basic(|z|^p) dm_a
  double middle = 0.0;  // sup_a sum_n upsilon_n m_a(|z|^p >= n)
  double rhs = 0.0;     // sum_n d_n
  bool abel_exact = true;
};

/// The three quantities and the exact Abel identity, each summed independently.
BasicChain basic_chain(const MeasureFamily& family, const ScaleSequence& scale);

Check verify_basic(const MeasureFamily& family, const ScaleSequence& scale);
Check verify_moderate(const YoungFunction& y, const VerifyOptions& opts = {});
Check verify_second_derivative(const YoungFunction& y, const VerifyOptions& opts = {});
Check verify_submultiplicative(const YoungFunction& y, const VerifyOptions& opts = {});
/// `q_override` replaces q in the identities (negative control).
Check verify_small_x(const YoungFunction& y, const VerifyOptions& opts = {},
                     std::optional<double> q_override = std::nullopt);
/// Power-join numerics over a p-grid in (0, 2): derivative 1/6 at x0, x0 decreasing in p.
Check verify_power_join(int points = 50);
Check verify_finally_decreasing(const YoungFunction& y, const VerifyOptions& opts = {});
Check verify_mollification_gap(const YoungFunction& y, const VerifyOptions& opts = {});
/// Empirical sup of x Upsilon'(x) / Upsilon(x) over the verification grid, with its witness.
std::pair<double, double> moderate_constant(const YoungFunction& y, const VerifyOptions& opts = {});
Check verify_growth_bounds(const YoungFunction& y, const VerifyOptions& opts = {});
Check verify_ui_improvement(const MeasureFamily& family, const YoungFunction& y,
                            const std::vector<double>& radii);
Check verify_equivalence(const YoungFunction& y);

/// Default radius list for verify_ui_improvement: 0, 1/2, 1, 2, ... past the largest atom.
std::vector<double> default_radii(const MeasureFamily& family);

struct SuiteInputs {
  const YoungFunction* young = nullptr;
  const MeasureFamily* family = nullptr;  // optional: family-level checks are skipped without it
  const ScaleSequence* scale = nullptr;
};

/// Runs every applicable check on `jobs` workers; the order of the report is fixed.
VerificationReport run_suite(const SuiteInputs& in, const VerifyOptions& opts = {}, unsigned jobs = 1);

}  // namespace youngfn
