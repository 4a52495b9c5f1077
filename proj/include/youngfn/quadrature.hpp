#pragma once

#include <functional>

namespace youngfn {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 40;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Adaptive Simpson rule on [a, b]. Never throws; check `converged`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opts = {});

/// Same, but throws ConstructionError when the tolerance is not reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace youngfn
