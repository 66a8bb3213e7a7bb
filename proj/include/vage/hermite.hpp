#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace vage {

using Complex = std::complex<double>;

inline constexpr unsigned kHermiteMaxDegree = 500;

/// Physicists' h_n(z) = (-1)^n e^{z^2} d^n/dz^n e^{-z^2}, by
/// h_{n+1} = 2z h_n - 2n h_{n-1}. Throws DomainError for n > 500 and
/// OverflowError when the value leaves double range.
Complex hermite_poly(unsigned n, Complex z);

/// xi_n(z) = pi^{-1/4} (2^n n!)^{-1/2} e^{-z^2/2} h_n(z), via the normalized
/// recurrence so that no factorial is formed.
Complex hermite_fn(unsigned n, Complex z);
/// xi_0(z), ..., xi_{count-1}(z).
std::vector<Complex> hermite_fns(unsigned count, Complex z);

struct MehlerResult {
  Complex lhs;  // sum_{n < terms} xi_n(u) xi_n(v) s^n
  Complex rhs;  // closed form
  double abs_err = 0.0;
};

/// Throws DomainError when |s| >= 1.
MehlerResult mehler_check(Complex u, Complex v, Complex s, unsigned terms);

struct StripEstimate {
  double tau = 0.0;
  bool infinite = false;
  std::size_t window_lo = 0, window_hi = 0;
  /// Estimates over [n/8, n/4], [n/4, n/2], [n/2, n] for n = n_max.
  double history[3] = {0.0, 0.0, 0.0};
};

/// tau = -limsup (2n+1)^{-1/2} log|F_n|, estimated as minus the max of
/// (2n+1)^{-1/2} log|F_n| over [n_max/2, n_max]. The estimate is reported
/// infinite when it grows over the last three window doublings and ends
/// above `cap`.
StripEstimate strip_radius(const std::function<double(std::size_t)>& log_coeff, std::size_t n_max,
                           double cap = 10.0);

struct Quadrature {
  double rel_tol = 1e-9;     // successive step-halving agreement
  double tail_tol = 1e-14;   // integrand on the box boundary, relative to its peak
  double initial_step = 0.5;
  unsigned max_halvings = 8;
};

struct GpNormResult {
  double integral = 0.0;     // K_p times the weighted area integral
  double coefficient = 0.0;  // sum |f_n|^2 2^{np}
  double half_width = 0.0;   // L
  double step = 0.0;         // final h
};

/// f = sum_n coeffs[n] xi_n. Trapezoid on [-L, L]^2 of
/// K_p |f(x+iy)|^2 e^{((1-s)/(1+s)) x^2 - ((1+s)/(1-s)) y^2}, s = 2^{-p}.
/// Throws ConvergenceError when step halving does not settle.
GpNormResult gp_integral_norm(const std::vector<Complex>& coeffs, int p, const Quadrature& quad = {});

}  // namespace vage
