#include "ptnlms/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptnlms {

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : v_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::is_symmetric(double rel_tol) const {
  const double scale = frobenius_norm();
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double quadratic_form(const Matrix& m, std::span<const double> x) {
  const std::size_t n = m.size();
  if (x.size() != n)
    throw std::invalid_argument("quadratic_form: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m(i, j) * x[j];
    acc += x[i] * row;
  }
  return acc;
}

Matrix diagonal_sandwich(const Matrix& m, std::span<const double> g) {
  const std::size_t n = m.size();
  if (g.size() != n)
    throw std::invalid_argument("diagonal_sandwich: dimension mismatch");
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g[i] > 0.0))
      throw std::invalid_argument("diagonal_sandwich: g must be positive");
    root[i] = std::sqrt(g[i]);
  }
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = root[i] * m(i, j) * root[j];
  return out;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One cyclic sweep of Jacobi rotations over the upper triangle.
void jacobi_sweep(Matrix& a) {
  const std::size_t n = a.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      const double tau = s / (1.0 + c);

      const double app = a(p, p);
      const double aqq = a(q, q);
      a(p, p) = app - t * apq;
      a(q, q) = aqq + t * apq;
      a(p, q) = 0.0;
      a(q, p) = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const double arp = a(r, p);
        const double arq = a(r, q);
        a(r, p) = arp - s * (arq + tau * arp);
        a(p, r) = a(r, p);
        a(r, q) = arq + s * (arp - tau * arq);
        a(q, r) = a(r, q);
      }
    }
  }
}

} // namespace

SymEig eig_sym(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("eig_sym: empty matrix");
  if (!m.is_symmetric())
    throw std::invalid_argument("eig_sym: matrix is not symmetric");

  SymEig out;
  if (n == 1) {
    out.lambda_min = out.lambda_max = m(0, 0);
  } else if (n == 2) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    out.lambda_min = mid - rad;
    out.lambda_max = mid + rad;
  } else {
    Matrix a = m;
    const double stop = 1e-12 * m.frobenius_norm();
    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
      if (off_diagonal_norm(a) <= stop) {
        converged = true;
        break;
      }
      jacobi_sweep(a);
    }
    if (!converged && off_diagonal_norm(a) > stop)
      throw std::runtime_error("eig_sym: Jacobi iteration failed to converge");
    double lo = a(0, 0), hi = a(0, 0);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, a(i, i));
      hi = std::max(hi, a(i, i));
    }
    out.lambda_min = lo;
    out.lambda_max = hi;
  }
  out.positive_definite = out.lambda_min > 0.0;
  return out;
}

double cond(const Matrix& m) {
  const SymEig e = eig_sym(m);
  if (!e.positive_definite)
    throw std::domain_error("cond: matrix is not positive definite");
  return e.lambda_max / e.lambda_min;
}

double cond_gain(std::span<const double> w_o) {
  if (w_o.empty()) throw std::invalid_argument("cond_gain: empty vector");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double wi : w_o) {
    const double a = std::abs(wi);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

BoundCheck bound_check(const Matrix& r, std::span<const double> g_o) {
  if (g_o.size() != r.size())
    throw std::invalid_argument("bound_check: dimension mismatch");
  double g_lo = std::numeric_limits<double>::infinity();
  double g_hi = 0.0;
  for (double g : g_o) {
    if (!(g > 0.0))
      throw std::invalid_argument("bound_check: g_o must be strictly positive");
    g_lo = std::min(g_lo, g);
    g_hi = std::max(g_hi, g);
  }
  BoundCheck out;
  out.kappa_gain = g_hi / g_lo; // exact for a diagonal matrix
  out.kappa_r = cond(r);
  out.kappa_r_prime = cond(diagonal_sandwich(r, g_o));
  out.holds = out.kappa_r_prime <= out.kappa_gain * out.kappa_r * (1.0 + 1e-9);
  return out;
}

std::vector<double> optimal_gain(std::span<const double> w_o,
                                 const GainRule& rule) {
  return gain(rule, w_o);
}

namespace {

void check_positive_gain(std::span<const double> g) {
  for (double gi : g)
    if (!(gi > 0.0))
      throw std::invalid_argument("transform: gain entries must be positive");
}

} // namespace

TransformedPair transform(std::span<const double> w, std::span<const double> x,
                          std::span<const double> g) {
  if (w.size() != g.size() || x.size() != g.size())
    throw std::invalid_argument("transform: dimension mismatch");
  check_positive_gain(g);
  TransformedPair out;
  out.w.resize(g.size());
  out.x.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double root = std::sqrt(g[i]);
    out.w[i] = w[i] / root;
    out.x[i] = x[i] * root;
  }
  return out;
}

TransformedPair inverse_transform(std::span<const double> w_prime,
                                  std::span<const double> x_prime,
                                  std::span<const double> g) {
  if (w_prime.size() != g.size() || x_prime.size() != g.size())
    throw std::invalid_argument("inverse_transform: dimension mismatch");
  check_positive_gain(g);
  TransformedPair out;
  out.w.resize(g.size());
  out.x.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double root = std::sqrt(g[i]);
    out.w[i] = w_prime[i] * root;
    out.x[i] = x_prime[i] / root;
  }
  return out;
}

SurfaceSpec SurfaceSpec::identification(Matrix R, std::vector<double> g_o,
                                        std::vector<double> w_o,
                                        double noise_var) {
  SurfaceSpec s;
  s.R = std::move(R);
  s.g_o = std::move(g_o);
  s.w_o = std::move(w_o);
  s.sigma_n2 = noise_var;
  s.validate();
  s.sigma_d2 = quadratic_form(s.R, s.w_o) + noise_var;
  return s;
}

void SurfaceSpec::validate() const {
  const std::size_t n = R.size();
  if (n == 0) throw std::invalid_argument("surface: empty R");
  if (g_o.size() != n || w_o.size() != n)
    throw std::invalid_argument("surface: dimension mismatch");
  if (!R.is_symmetric())
    throw std::invalid_argument("surface: R is not symmetric");
  for (double g : g_o)
    if (!(g > 0.0))
      throw std::invalid_argument("surface: g_o must be strictly positive");
  if (!(sigma_n2 >= 0.0))
    throw std::invalid_argument("surface: negative noise power");
}

std::vector<double> SurfaceSpec::w_prime_o() const {
  std::vector<double> out(w_o.size());
  for (std::size_t i = 0; i < w_o.size(); ++i) out[i] = w_o[i] / std::sqrt(g_o[i]);
  return out;
}

std::vector<double> SurfaceSpec::p_prime() const {
  const std::size_t n = R.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += R(i, j) * w_o[j];
    out[i] = std::sqrt(g_o[i]) * acc;
  }
  return out;
}

Matrix SurfaceSpec::r_prime() const { return diagonal_sandwich(R, g_o); }

double mse(const SurfaceSpec& spec, std::span<const double> w) {
  const std::size_t n = spec.R.size();
  if (w.size() != n) throw std::invalid_argument("mse: dimension mismatch");
  std::vector<double> dw(n);
  for (std::size_t i = 0; i < n; ++i) dw[i] = w[i] - spec.w_o[i];
  return spec.xi_min() + quadratic_form(spec.R, dw);
}

double mse_transformed(const SurfaceSpec& spec,
                       std::span<const double> w_prime) {
  const std::size_t n = spec.R.size();
  if (w_prime.size() != n)
    throw std::invalid_argument("mse_transformed: dimension mismatch");
  std::vector<double> dw(n);
  for (std::size_t i = 0; i < n; ++i)
    dw[i] = w_prime[i] - spec.w_o[i] / std::sqrt(spec.g_o[i]);
  // (dw')^T G^{1/2} R G^{1/2} dw' without forming R'
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = std::sqrt(spec.g_o[i]) * dw[i];
  return spec.xi_min() + quadratic_form(spec.R, scaled);
}

double ContourGrid::coord0(std::size_t i) const {
  if (axis0.samples < 2) return axis0.lo;
  return axis0.lo + static_cast<double>(i) * (axis0.hi - axis0.lo) /
                        static_cast<double>(axis0.samples - 1);
}

double ContourGrid::coord1(std::size_t j) const {
  if (axis1.samples < 2) return axis1.lo;
  return axis1.lo + static_cast<double>(j) * (axis1.hi - axis1.lo) /
                        static_cast<double>(axis1.samples - 1);
}

ContourGrid contour_grid(const SurfaceSpec& spec, const AxisSpec& axis0,
                         const AxisSpec& axis1) {
  spec.validate();
  if (spec.R.size() != 2)
    throw std::invalid_argument("contour_grid: surface must have 2 parameters");
  if (axis0.samples == 0 || axis1.samples == 0)
    throw std::invalid_argument("contour_grid: empty axis");
  if (!(axis0.hi >= axis0.lo) || !(axis1.hi >= axis1.lo))
    throw std::invalid_argument("contour_grid: inverted axis range");

  ContourGrid grid;
  grid.axis0 = axis0;
  grid.axis1 = axis1;
  grid.xi.resize(axis0.samples * axis1.samples);
  double point[2];
  for (std::size_t i = 0; i < axis0.samples; ++i) {
    point[0] = grid.coord0(i);
    for (std::size_t j = 0; j < axis1.samples; ++j) {
      point[1] = grid.coord1(j);
      grid.xi[i * axis1.samples + j] = mse_transformed(spec, point);
    }
  }
  return grid;
}

} // namespace ptnlms
