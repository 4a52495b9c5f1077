#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace youngfn {

/// A point mass at distance `radius` from the origin.
struct Atom {
  double radius;
  double weight;
};

/// Finite radial measure. Atoms are kept sorted by descending radius so every sum
/// accumulates in the same order.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double max_radius() const { return atoms_.empty() ? 0.0 : atoms_.front().radius; }

 private:
  std::vector<Atom> atoms_;
};

/// The family {m_alpha} together with the moment exponent p.
class MeasureFamily {
 public:
  MeasureFamily(std::vector<AtomicMeasure> members, double p);

  const std::vector<AtomicMeasure>& members() const { return members_; }
  double p() const { return p_; }
  double max_radius() const;

  /// Image family under z -> g(|z|^p), returned with exponent `new_p`.
  MeasureFamily pushforward(const std::function<double(double)>& g, double new_p) const;

 private:
  std::vector<AtomicMeasure> members_;
  double p_;
};

/// Region selector for integrate_sup.
struct Region {
  enum class Kind { PLevelAtLeast, RadiusAbove, All };
  Kind kind = Kind::All;
  double threshold = 0.0;

  static Region p_level_at_least(double k) { return {Kind::PLevelAtLeast, k}; }
  static Region radius_above(double r) { return {Kind::RadiusAbove, r}; }
  static Region all() { return {Kind::All, 0.0}; }

  bool contains(double radius, double p) const;
};

/// sup_alpha of the p-moment over the closed level set {|z|^p >= k}.
double p_tail(const MeasureFamily& family, double k);

/// sup_alpha of the second moment over {|z| <= kappa}.
double small_jump_mass(const MeasureFamily& family, double kappa);

/// sup_alpha of sum_i w_i g(r_i) over the atoms inside `region`.
/// Throws DomainError if g is not finite at an atom inside the region.
double integrate_sup(const MeasureFamily& family, const std::function<double(double)>& g,
                     const Region& region);

struct UniformIntegrabilityReport {
  std::vector<double> radii;
  std::vector<double> tails;
  std::vector<double> kappas;
  std::vector<double> small_masses;
  bool tails_decreasing = true;
  bool small_masses_decreasing = true;
  bool tail_reaches_zero = false;
};

/// Samples both limits of the uniform-integrability assumption. R is a radius;
/// the corresponding tail threshold is R^p. Throws ConstructionError if either
/// sequence increases by more than 1e-12.
UniformIntegrabilityReport check_uniform_integrability(const MeasureFamily& family,
                                                       const std::vector<double>& radii,
                                                       const std::vector<double>& kappas);

/// Parses {"p": number, "members": [{"atoms": [[r, w], ...]}, ...]}.
MeasureFamily parse_measure_family(const std::string& json_text);
MeasureFamily load_measure_family(const std::string& path);
std::string dump_measure_family(const MeasureFamily& family);

}  // namespace youngfn
