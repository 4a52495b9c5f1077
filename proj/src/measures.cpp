#include "youngfn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "youngfn/errors.hpp"

namespace youngfn {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!(a.radius > 0.0) || !std::isfinite(a.radius))
      throw ValidationError("atom radius must be positive and finite");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw ValidationError("atom weight must be positive and finite");
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& l, const Atom& r) { return l.radius > r.radius; });
}

MeasureFamily::MeasureFamily(std::vector<AtomicMeasure> members, double p)
    : members_(std::move(members)), p_(p) {
  if (!(p_ > 0.0) || !std::isfinite(p_)) throw ValidationError("exponent p must be positive");
  if (members_.empty()) throw ValidationError("measure family must have at least one member");
}

double MeasureFamily::max_radius() const {
  double r = 0.0;
  for (const auto& m : members_) r = std::max(r, m.max_radius());
  return r;
}

MeasureFamily MeasureFamily::pushforward(const std::function<double(double)>& g,
                                         double new_p) const {
  std::vector<AtomicMeasure> out;
  out.reserve(members_.size());
  for (const auto& m : members_) {
    std::vector<Atom> atoms;
    atoms.reserve(m.atoms().size());
    for (const auto& a : m.atoms()) atoms.push_back({g(std::pow(a.radius, p_)), a.weight});
    out.emplace_back(std::move(atoms));
  }
  return MeasureFamily(std::move(out), new_p);
}

bool Region::contains(double radius, double p) const {
  switch (kind) {
    case Kind::PLevelAtLeast:
      return std::pow(radius, p) >= threshold;
    case Kind::RadiusAbove:
      return radius > threshold;
    case Kind::All:
      return true;
  }
  return false;
}

double p_tail(const MeasureFamily& family, double k) {
  if (!(k >= 0.0)) throw DomainError("p_tail threshold must be non-negative");
  const double p = family.p();
  double best = 0.0;
  for (const auto& m : family.members()) {
    double sum = 0.0;
    for (const auto& a : m.atoms()) {
      const double rp = std::pow(a.radius, p);
      if (rp < k) break;  // atoms are sorted by descending radius
      sum += a.weight * rp;
    }
    best = std::max(best, sum);
  }
  return best;
}

double small_jump_mass(const MeasureFamily& family, double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0, 1]");
  double best = 0.0;
  for (const auto& m : family.members()) {
    double sum = 0.0;
    for (const auto& a : m.atoms())
      if (a.radius <= kappa) sum += a.weight * a.radius * a.radius;
    best = std::max(best, sum);
  }
  return best;
}

double integrate_sup(const MeasureFamily& family, const std::function<double(double)>& g,
                     const Region& region) {
  double best = 0.0;
  for (const auto& m : family.members()) {
    double sum = 0.0;
    for (const auto& a : m.atoms()) {
      if (!region.contains(a.radius, family.p())) continue;
      const double v = g(a.radius);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand is not finite at radius " << a.radius;
        throw DomainError(os.str());
      }
      sum += a.weight * v;
    }
    best = std::max(best, sum);
  }
  return best;
}

UniformIntegrabilityReport check_uniform_integrability(const MeasureFamily& family,
                                                       const std::vector<double>& radii,
                                                       const std::vector<double>& kappas) {
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1.0 || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("radii must be increasing and >= 1");
  }
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0 && kappas[i] <= 1.0) || (i > 0 && !(kappas[i] < kappas[i - 1])))
      throw DomainError("kappas must be decreasing in (0, 1]");
  }

  UniformIntegrabilityReport rep;
  rep.radii = radii;
  rep.kappas = kappas;
  for (double r : radii) rep.tails.push_back(p_tail(family, std::pow(r, family.p())));
  for (double k : kappas) rep.small_masses.push_back(small_jump_mass(family, k));

  for (std::size_t i = 1; i < rep.tails.size(); ++i)
    if (rep.tails[i] > rep.tails[i - 1] + kTol) rep.tails_decreasing = false;
  for (std::size_t i = 1; i < rep.small_masses.size(); ++i)
    if (rep.small_masses[i] > rep.small_masses[i - 1] + kTol) rep.small_masses_decreasing = false;
  rep.tail_reaches_zero = !rep.tails.empty() && rep.tails.back() == 0.0;

  if (!rep.tails_decreasing) throw ConstructionError("sampled p-tail sequence increases");
  if (!rep.small_masses_decreasing)
    throw ConstructionError("sampled small-jump second moments increase as kappa decreases");
  return rep;
}

MeasureFamily parse_measure_family(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("measure document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc["p"].is_number())
    throw ValidationError("measure document needs a numeric \"p\"");
  if (!doc.contains("members") || !doc["members"].is_array())
    throw ValidationError("measure document needs a \"members\" array");

  std::vector<AtomicMeasure> members;
  for (const auto& m : doc["members"]) {
    if (!m.is_object() || !m.contains("atoms") || !m["atoms"].is_array())
      throw ValidationError("each member needs an \"atoms\" array");
    std::vector<Atom> atoms;
    for (const auto& a : m["atoms"]) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw ValidationError("atoms are [radius, weight] pairs");
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
    members.emplace_back(std::move(atoms));
  }
  return MeasureFamily(std::move(members), doc["p"].get<double>());
}

MeasureFamily load_measure_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measure file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_measure_family(ss.str());
}

std::string dump_measure_family(const MeasureFamily& family) {
  nlohmann::json doc;
  doc["p"] = family.p();
  doc["members"] = nlohmann::json::array();
  for (const auto& m : family.members()) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms()) atoms.push_back({a.radius, a.weight});
    doc["members"].push_back({{"atoms", atoms}});
  }
  return doc.dump(2);
}

}  // namespace youngfn
