#include "youngfn/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "youngfn/errors.hpp"

namespace youngfn {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  bool converged = true;
  double error = 0.0;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Depth 0 always splits once more: a symmetric bump can fool the first estimate.
    if (depth >= 2 && std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      converged = false;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opts) {
  if (a == b) return {0.0, 0.0, true};
  Simpson s{f, opts.max_depth};
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = s.recurse(a, b, fa, fm, fb, whole, opts.abs_tol, 0);
  return {v, s.error, s.converged};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  const auto r = adaptive_simpson(f, a, b, opts);
  if (!r.converged || !std::isfinite(r.value)) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge on [" << a << ", " << b << "]: estimate " << r.value
       << ", error " << r.error_estimate;
    throw ConstructionError(os.str());
  }
  return r.value;
}

}  // namespace youngfn
