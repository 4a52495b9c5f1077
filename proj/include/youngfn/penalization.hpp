#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "youngfn/young.hpp"

namespace youngfn {

/// |x|^2 v |x|^{p v 2} (the non-smooth variant).
double quasidistance(double p, const Eigen::VectorXd& x);

struct QuasidistanceReport {
  bool ok = true;
  double multiplier_ratio = 0.0;  // max phi(x+y) / (2^{2(p v 2)-2} (phi(x)+phi(y)))
  double growth_low_ratio = 0.0;  // max 2^{2-(p v 2)} (|x|^2 v |x|^{p v 2}) / phi(x)
  double growth_high_ratio = 0.0; // max phi(x) / (|x|^2 v |x|^{p v 2})
  std::optional<Eigen::VectorXd> witness;
};

/// Both quasidistance inequalities on `samples` random pairs in dimension `dim`.
QuasidistanceReport verify_quasidistance(double p, int samples, int dim = 2,
                                         std::uint64_t seed = 0x9d5c3a7e1f2b4c6dULL);

struct PenalizationParams {
  double delta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double T = 1.0;
  const YoungFunction* young = nullptr;

  /// Throws DomainError for negative coefficients, T <= 0 or a missing Young function.
  void validate() const;
};

/// delta/(T-t) + lambda |x-y|^2 + gamma e^{mu t} (Upsilon(|x|^p) + Upsilon(|y|^p)).
double penal_eval(const PenalizationParams& prm, double t, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y);

/// (grad_x, grad_y); the Upsilon term of a zero argument contributes 0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> penal_grad(const PenalizationParams& prm, double t,
                                                       const Eigen::VectorXd& x,
                                                       const Eigen::VectorXd& y);

/// Upsilon''(|x|^p) |x|^{2p-2} + Upsilon'(|x|^p) |x|^{p-2}; 0 at the origin.
double hessian_bound_entries(const YoungFunction& young, const Eigen::VectorXd& xbar);

/// Constant with |D^2 Upsilon(|z|^p)|_{ij} <= C_p * hessian_bound_entries: max(p^2, p(1+|p-2|)).
double hessian_constant(double p);

/// Exact Hessian of z -> Upsilon(|z|^p) for z != 0.
Eigen::MatrixXd young_radial_hessian(const YoungFunction& young, const Eigen::VectorXd& z);

/// 2^{3(p v 2)} C (1 + phi_p(x)).
double delta_growth(const Eigen::VectorXd& x, double p, double C);

/// Values on a tensor grid: f(i, j) sits at (x_i, y_j); 1-d grids have one column and no y axis.
class GridFunction {
 public:
  GridFunction(Eigen::VectorXd x, Eigen::VectorXd values);
  GridFunction(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::MatrixXd values);

  int dim() const { return y_ ? 2 : 1; }
  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return *y_; }
  const Eigen::MatrixXd& values() const { return f_; }
  Eigen::VectorXd point(Eigen::Index i, Eigen::Index j) const;

  GridFunction with_values(Eigen::MatrixXd values) const;

  /// CSV with header "x,f" or "x,y,f"; rows x-major.
  std::string to_csv() const;
  static GridFunction from_csv(const std::string& text);

 private:
  void validate() const;

  Eigen::VectorXd x_;
  std::optional<Eigen::VectorXd> y_;
  Eigen::MatrixXd f_;
};

/// max over grid points y of f(y) - phi_p(x - y)/eps, at every grid point x.
GridFunction sup_conv(const GridFunction& f, double p, double eps, unsigned jobs = 1);
/// -sup_conv(-f).
GridFunction inf_conv(const GridFunction& f, double p, double eps, unsigned jobs = 1);

}  // namespace youngfn
