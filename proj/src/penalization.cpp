#include "youngfn/penalization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "youngfn/errors.hpp"
#include "youngfn/format.hpp"

namespace youngfn {

double quasidistance(double p, const Eigen::VectorXd& x) {
  const double r = x.norm();
  return std::max(r * r, std::pow(r, std::max(p, 2.0)));
}

QuasidistanceReport verify_quasidistance(double p, int samples, int dim, std::uint64_t seed) {
  QuasidistanceReport rep;
  const double pv = std::max(p, 2.0);
  const double mult = std::pow(2.0, 2.0 * pv - 2.0);
  const double low = std::pow(2.0, 2.0 - pv);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logr(std::log(1e-3), std::log(1e3));
  std::normal_distribution<double> gauss;
  auto sample = [&] {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return Eigen::VectorXd(v.normalized() * std::exp(logr(rng)));
  };
  auto bound = [&](const Eigen::VectorXd& v) {
    const double r = v.norm();
    return std::max(r * r, std::pow(r, pv));
  };
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = sample();
    const Eigen::VectorXd y = s % 8 == 0 ? Eigen::VectorXd(x) : sample();
    const double m = quasidistance(p, x + y) / (mult * (quasidistance(p, x) + quasidistance(p, y)));
    const double gl = low * bound(x) / quasidistance(p, x);
    const double gh = quasidistance(p, x) / bound(x);
    rep.multiplier_ratio = std::max(rep.multiplier_ratio, m);
    rep.growth_low_ratio = std::max(rep.growth_low_ratio, gl);
    rep.growth_high_ratio = std::max(rep.growth_high_ratio, gh);
    if (rep.ok && (m > 1.0 + 1e-12 || gl > 1.0 + 1e-12 || gh > 1.0 + 1e-12)) {
      rep.ok = false;
      rep.witness = x;
    }
  }
  return rep;
}

void PenalizationParams::validate() const {
  if (!(delta >= 0.0 && gamma >= 0.0 && lambda >= 0.0 && mu >= 0.0))
    throw DomainError("penalization coefficients must be non-negative");
  if (!(T > 0.0)) throw DomainError("T must be positive");
  if (!young) throw DomainError("penalization needs a Young function");
}

namespace {

void check_time(const PenalizationParams& prm, double t) {
  prm.validate();
  if (!(t >= 0.0 && t < prm.T)) throw DomainError("t must satisfy 0 <= t < T");
}

double young_of_norm(const YoungFunction& y, const Eigen::VectorXd& x) {
  return y(std::pow(x.norm(), y.p()));
}

// p Upsilon'(|x|^p) |x|^{p-2} x, continuously extended by 0 at the origin.
Eigen::VectorXd young_gradient(const YoungFunction& y, const Eigen::VectorXd& x) {
  const double r = x.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  const double p = y.p();
  return p * y.d1(std::pow(r, p)) * std::pow(r, p - 2.0) * x;
}

}  // namespace

double penal_eval(const PenalizationParams& prm, double t, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  check_time(prm, t);
  if (x.size() != y.size()) throw DomainError("x and y must have the same dimension");
  const auto& Y = *prm.young;
  return prm.delta / (prm.T - t) + prm.lambda * (x - y).squaredNorm() +
         prm.gamma * std::exp(prm.mu * t) * (young_of_norm(Y, x) + young_of_norm(Y, y));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> penal_grad(const PenalizationParams& prm, double t,
                                                       const Eigen::VectorXd& x,
                                                       const Eigen::VectorXd& y) {
  check_time(prm, t);
  if (x.size() != y.size()) throw DomainError("x and y must have the same dimension");
  const double g = prm.gamma * std::exp(prm.mu * t);
  const Eigen::VectorXd diff = 2.0 * prm.lambda * (x - y);
  return {diff + g * young_gradient(*prm.young, x), -diff + g * young_gradient(*prm.young, y)};
}

double hessian_bound_entries(const YoungFunction& young, const Eigen::VectorXd& xbar) {
  const double s = xbar.norm();
  if (s == 0.0) return 0.0;
  const double p = young.p();
  const double sp = std::pow(s, p);
  return young.d2(sp) * std::pow(s, 2.0 * p - 2.0) + young.d1(sp) * std::pow(s, p - 2.0);
}

double hessian_constant(double p) { return std::max(p * p, p * (1.0 + std::abs(p - 2.0))); }

Eigen::MatrixXd young_radial_hessian(const YoungFunction& young, const Eigen::VectorXd& z) {
  const double r = z.norm();
  if (r == 0.0) throw DomainError("Hessian is evaluated away from the origin");
  const double p = young.p();
  const double rp = std::pow(r, p);
  const double u1 = young.d1(rp), u2 = young.d2(rp);
  const double a = p * u1 * std::pow(r, p - 2.0);
  const double b = p * p * u2 * std::pow(r, 2.0 * p - 4.0) + p * (p - 2.0) * u1 * std::pow(r, p - 4.0);
  return a * Eigen::MatrixXd::Identity(z.size(), z.size()) + b * z * z.transpose();
}

double delta_growth(const Eigen::VectorXd& x, double p, double C) {
  if (!(C > 0.0)) throw DomainError("C must be positive");
  return std::pow(2.0, 3.0 * std::max(p, 2.0)) * C * (1.0 + quasidistance(p, x));
}

// ---------------------------------------------------------------------------------------

GridFunction::GridFunction(Eigen::VectorXd x, Eigen::VectorXd values)
    : x_(std::move(x)), f_(Eigen::MatrixXd(values)) {
  validate();
}

GridFunction::GridFunction(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::MatrixXd values)
    : x_(std::move(x)), y_(std::move(y)), f_(std::move(values)) {
  validate();
}

void GridFunction::validate() const {
  auto sorted = [](const Eigen::VectorXd& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (!std::isfinite(a[i])) return false;
      if (i > 0 && !(a[i] > a[i - 1])) return false;
    }
    return a.size() > 0;
  };
  if (!sorted(x_) || (y_ && !sorted(*y_))) throw ValidationError("grid axes must be strictly increasing");
  const Eigen::Index cols = y_ ? y_->size() : 1;
  if (f_.rows() != x_.size() || f_.cols() != cols) throw ValidationError("grid values have the wrong shape");
  if (!f_.allFinite()) throw ValidationError("grid values must be finite");
}

Eigen::VectorXd GridFunction::point(Eigen::Index i, Eigen::Index j) const {
  if (!y_) return Eigen::VectorXd::Constant(1, x_[i]);
  return Eigen::Vector2d(x_[i], (*y_)[j]);
}

GridFunction GridFunction::with_values(Eigen::MatrixXd values) const {
  if (y_) return GridFunction(x_, *y_, std::move(values));
  return GridFunction(x_, Eigen::VectorXd(values.col(0)));
}

std::string GridFunction::to_csv() const {
  std::ostringstream os;
  os << (y_ ? "x,y,f\n" : "x,f\n");
  for (Eigen::Index i = 0; i < f_.rows(); ++i)
    for (Eigen::Index j = 0; j < f_.cols(); ++j) {
      os << format_double(x_[i]) << ',';
      if (y_) os << format_double((*y_)[j]) << ',';
      os << format_double(f_(i, j)) << '\n';
    }
  return os.str();
}

GridFunction GridFunction::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty grid CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int cols = 0;
  if (line == "x,f") cols = 2;
  else if (line == "x,y,f") cols = 3;
  else throw ValidationError("grid CSV header must be 'x,f' or 'x,y,f'");

  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> r;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      r.push_back(parse_double(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(r.size()) != cols) throw ValidationError("grid CSV row has the wrong arity");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ValidationError("grid CSV has no rows");

  if (cols == 2) {
    Eigen::VectorXd x(rows.size()), f(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x[i] = rows[i][0];
      f[i] = rows[i][1];
    }
    return GridFunction(std::move(x), std::move(f));
  }
  // x-major: the y axis is the run of rows sharing the first x.
  std::size_t ny = 0;
  while (ny < rows.size() && rows[ny][0] == rows[0][0]) ++ny;
  if (rows.size() % ny != 0) throw ValidationError("grid CSV is not a complete tensor grid");
  const std::size_t nx = rows.size() / ny;
  Eigen::VectorXd x(nx), y(ny);
  Eigen::MatrixXd f(nx, ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const auto& r = rows[i * ny + j];
      if (j == 0) x[i] = r[0];
      if (i == 0) y[j] = r[1];
      if (r[0] != x[i] || r[1] != y[j]) throw ValidationError("grid CSV is not a complete tensor grid");
      f(i, j) = r[2];
    }
  return GridFunction(std::move(x), std::move(y), std::move(f));
}

GridFunction sup_conv(const GridFunction& f, double p, double eps, unsigned jobs) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const Eigen::MatrixXd& v = f.values();
  const Eigen::Index nx = v.rows(), ny = v.cols();
  Eigen::MatrixXd out(nx, ny);

  // Flattened coordinates, row r = i * ny + j.
  const Eigen::Index n = nx * ny;
  Eigen::MatrixXd pts(n, f.dim());
  Eigen::VectorXd vals(n);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) {
      pts.row(i * ny + j) = f.point(i, j).transpose();
      vals[i * ny + j] = v(i, j);
    }
  const double pv = std::max(p, 2.0);
  auto phi = [pv](double r2) { return r2 <= 1.0 ? r2 : std::pow(r2, 0.5 * pv); };

  auto rows = [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index i = lo; i < hi; ++i)
      for (Eigen::Index j = 0; j < ny; ++j) {
        const Eigen::Index a = i * ny + j;
        double best = vals[a];  // y = x
        for (Eigen::Index b = 0; b < n; ++b) {
          if (b == a) continue;
          const double cand = vals[b] - phi((pts.row(a) - pts.row(b)).squaredNorm()) / eps;
          if (cand > best) best = cand;
        }
        out(i, j) = best;
      }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(nx)));
  std::vector<std::thread> pool;
  const Eigen::Index chunk = (nx + jobs - 1) / jobs;
  for (unsigned t = 1; t < jobs; ++t) {
    const Eigen::Index lo = std::min<Eigen::Index>(nx, t * chunk);
    pool.emplace_back(rows, lo, std::min<Eigen::Index>(nx, lo + chunk));
  }
  rows(0, std::min<Eigen::Index>(nx, chunk));
  for (auto& th : pool) th.join();
  return f.with_values(std::move(out));
}

GridFunction inf_conv(const GridFunction& f, double p, double eps, unsigned jobs) {
  const GridFunction neg = f.with_values(-f.values());
  const GridFunction s = sup_conv(neg, p, eps, jobs);
  return f.with_values(-s.values());
}

}  // namespace youngfn
