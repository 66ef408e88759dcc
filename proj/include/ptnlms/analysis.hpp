#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ptnlms/filters.hpp"

namespace ptnlms {

/// Minimal dense square matrix, row-major. Sized for desk-scale work
/// (correlation matrices up to a few hundred taps).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), v_(n * n, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix scaled_identity(std::size_t n, double s) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }

  double frobenius_norm() const;
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

/// x^T M x
double quadratic_form(const Matrix& m, std::span<const double> x);

/// G^{1/2} M G^{1/2} for the diagonal matrix with g on its diagonal,
/// i.e. entrywise m_ij * sqrt(g_i * g_j). Requires g > 0 elementwise.
Matrix diagonal_sandwich(const Matrix& m, std::span<const double> g);

struct SymEig {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool positive_definite = false;
};

/// Extremal eigenvalues of a symmetric matrix: closed form for 1x1/2x2,
/// cyclic Jacobi sweeps otherwise, iterated until the off-diagonal Frobenius
/// mass drops below 1e-12 * ||M||_F. Throws std::invalid_argument on
/// asymmetric input; a nonpositive minimum eigenvalue is reported through
/// the positive_definite flag, not an exception.
SymEig eig_sym(const Matrix& m);

/// kappa(M) = lambda_max / lambda_min. Throws std::domain_error when M is
/// not positive definite.
double cond(const Matrix& m);

/// Conditioning of the pure-proportional gain matrix at the true system:
/// max_i |w_i| / min_j |w_j|. A zero entry yields +infinity (the degenerate
/// sparse case), not an exception.
double cond_gain(std::span<const double> w_o);

struct BoundCheck {
  double kappa_r_prime = 0.0; // kappa(G^{1/2} R G^{1/2})
  double kappa_gain = 0.0;    // kappa(G) = max g / min g
  double kappa_r = 0.0;       // kappa(R)
  bool holds = false;         // kappa(R') <= kappa(G) * kappa(R) * (1 + 1e-9)
};

BoundCheck bound_check(const Matrix& r, std::span<const double> g_o);

/// The rule's gain vector evaluated at the true system coefficients; the
/// frozen "best possible" gain matrix used throughout the surface analysis.
std::vector<double> optimal_gain(std::span<const double> w_o,
                                 const GainRule& rule);

struct TransformedPair {
  std::vector<double> w;
  std::vector<double> x;
};

/// Change of variables w' = G^{-1/2} w, x' = G^{1/2} x. Preserves the inner
/// product: w'^T x' = w^T x. Requires g strictly positive.
TransformedPair transform(std::span<const double> w, std::span<const double> x,
                          std::span<const double> g);
TransformedPair inverse_transform(std::span<const double> w_prime,
                                  std::span<const double> x_prime,
                                  std::span<const double> g);

/// Quadratic error surface of the identification model d = w_o^T x + n with
/// independent zero-mean noise: minimum sigma_n2 at w_o, Hessian R in the
/// original coordinates and R' = G^{1/2} R G^{1/2} in the transformed ones.
struct SurfaceSpec {
  Matrix R;                  // input autocorrelation, symmetric PD
  std::vector<double> g_o;   // frozen gain diagonal, strictly positive
  std::vector<double> w_o;   // true system coefficients
  double sigma_d2 = 0.0;     // E[d^2] = w_o^T R w_o + sigma_n2
  double sigma_n2 = 0.0;     // measurement-noise power

  static SurfaceSpec identification(Matrix R, std::vector<double> g_o,
                                    std::vector<double> w_o, double noise_var);

  double xi_min() const { return sigma_n2; }
  std::vector<double> w_prime_o() const;  // G^{-1/2} w_o
  std::vector<double> p_prime() const;    // G^{1/2} R w_o
  Matrix r_prime() const;                 // G^{1/2} R G^{1/2}
  void validate() const;
};

/// xi(w) = xi_min + (w - w_o)^T R (w - w_o), original coordinates.
double mse(const SurfaceSpec& spec, std::span<const double> w);

/// xi(w') = xi_min + (w' - w'_o)^T R' (w' - w'_o), transformed coordinates.
/// Agrees with mse() under w' = G^{-1/2} w.
double mse_transformed(const SurfaceSpec& spec, std::span<const double> w_prime);

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
};

/// Rectangular evaluation of the two-parameter surface in its transformed
/// coordinates (for the identity rule these coincide with the original
/// ones). xi is stored row-major: xi[i0 * axis1.samples + i1].
struct ContourGrid {
  AxisSpec axis0;
  AxisSpec axis1;
  std::vector<double> xi;

  double coord0(std::size_t i) const;
  double coord1(std::size_t j) const;
  double at(std::size_t i, std::size_t j) const {
    return xi[i * axis1.samples + j];
  }
};

/// Only defined for 2-tap surfaces; throws std::invalid_argument otherwise.
ContourGrid contour_grid(const SurfaceSpec& spec, const AxisSpec& axis0,
                         const AxisSpec& axis1);

} // namespace ptnlms
