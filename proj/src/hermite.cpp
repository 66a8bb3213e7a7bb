#include "vage/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vage/errors.hpp"

namespace vage {

namespace {

void guard(unsigned n) {
  if (n > kHermiteMaxDegree) throw DomainError("hermite: degree above the guard of 500");
}

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

// xi_n(z) e^{z^2/2} for n < count.
std::vector<Complex> normalized_polys(unsigned count, Complex z) {
  std::vector<Complex> out(count);
  if (count == 0) return out;
  out[0] = kPiQuarter;
  if (count > 1) out[1] = std::numbers::sqrt2 * z * out[0];
  for (unsigned n = 1; n + 1 < count; ++n) {
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * z * out[n] - std::sqrt(double(n) / (n + 1)) * out[n - 1];
  }
  return out;
}

}  // namespace

Complex hermite_poly(unsigned n, Complex z) {
  guard(n);
  Complex prev = 1.0, cur = 2.0 * z;
  if (n == 0) return prev;
  for (unsigned k = 1; k < n; ++k) {
    const Complex next = 2.0 * z * cur - 2.0 * double(k) * prev;
    prev = cur;
    cur = next;
    if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag())) {
      throw OverflowError("hermite_poly: value overflows double range");
    }
  }
  return cur;
}

std::vector<Complex> hermite_fns(unsigned count, Complex z) {
  if (count > 0) guard(count - 1);
  auto out = normalized_polys(count, z);
  const Complex g = std::exp(-0.5 * z * z);
  for (auto& v : out) v *= g;
  return out;
}

Complex hermite_fn(unsigned n, Complex z) { return hermite_fns(n + 1, z)[n]; }

MehlerResult mehler_check(Complex u, Complex v, Complex s, unsigned terms) {
  if (!(std::abs(s) < 1.0)) throw DomainError("mehler_check: requires |s| < 1");
  const auto xu = hermite_fns(terms, u), xv = hermite_fns(terms, v);
  MehlerResult r;
  Complex sn = 1.0;
  for (unsigned n = 0; n < terms; ++n, sn *= s) r.lhs += xu[n] * xv[n] * sn;
  const Complex one_m = 1.0 - s * s;
  r.rhs = std::exp(-((1.0 + s * s) * (u * u + v * v) - 4.0 * s * u * v) / (2.0 * one_m)) /
          (std::sqrt(std::numbers::pi) * std::sqrt(one_m));
  r.abs_err = std::abs(r.lhs - r.rhs);
  return r;
}

StripEstimate strip_radius(const std::function<double(std::size_t)>& log_coeff, std::size_t n_max,
                           double cap) {
  if (n_max < 8) throw DomainError("strip_radius: n_max must be at least 8");
  auto window = [&](std::size_t hi) {
    double m = -INFINITY;
    for (std::size_t n = hi / 2; n <= hi; ++n) m = std::max(m, log_coeff(n) / std::sqrt(2.0 * n + 1.0));
    return -m;
  };
  StripEstimate r;
  r.window_lo = n_max / 2;
  r.window_hi = n_max;
  r.history[0] = window(n_max / 4);
  r.history[1] = window(n_max / 2);
  r.history[2] = window(n_max);
  r.tau = r.history[2];
  r.infinite = r.history[0] < r.history[1] && r.history[1] < r.history[2] && r.history[2] > cap;
  if (r.infinite) r.tau = INFINITY;
  return r;
}

GpNormResult gp_integral_norm(const std::vector<Complex>& coeffs, int p, const Quadrature& quad) {
  if (p < 1) throw DomainError("gp_integral_norm: p must be >= 1");
  if (coeffs.empty()) return {};
  guard(static_cast<unsigned>(coeffs.size() - 1));
  const double s = std::ldexp(1.0, -p);
  const double kp = std::ldexp(2.0, -p) / std::sqrt(std::numbers::pi * (1.0 - s * s));
  // |e^{-z^2/2}|^2 = e^{-x^2 + y^2} folded into the density.
  const double cx = 2.0 * s / (1.0 + s), cy = 2.0 * s / (1.0 - s);
  const unsigned count = static_cast<unsigned>(coeffs.size());
  auto integrand = [&](double x, double y) {
    const auto eta = normalized_polys(count, Complex(x, y));
    Complex f = 0.0;
    for (unsigned n = 0; n < count; ++n) f += coeffs[n] * eta[n];
    return std::norm(f) * std::exp(-cx * x * x - cy * y * y);
  };

  GpNormResult r;
  for (unsigned n = 0; n < count; ++n) r.coefficient += std::norm(coeffs[n]) * std::ldexp(1.0, int(n) * p);

  // Grow L until the integrand on the boundary is negligible against the peak
  // seen so far.
  double peak = integrand(0.0, 0.0);
  double L = 2.0;
  for (;; L += 1.0) {
    double edge = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double t = -L + 2.0 * L * i / 64.0;
      edge = std::max({edge, integrand(t, L), integrand(t, -L), integrand(L, t), integrand(-L, t)});
      peak = std::max({peak, integrand(t, 0.0), integrand(0.0, t)});
    }
    if (edge <= quad.tail_tol * peak) break;
    if (L > 200.0) throw ConvergenceError("gp_integral_norm: integrand does not decay");
  }
  r.half_width = L;

  auto trapezoid = [&](double h) {
    const long m = std::lround(L / h);
    h = L / double(m);
    double sum = 0.0;
    for (long i = -m; i <= m; ++i) {
      const double wx = (i == -m || i == m) ? 0.5 : 1.0;
      for (long j = -m; j <= m; ++j) {
        const double wy = (j == -m || j == m) ? 0.5 : 1.0;
        sum += wx * wy * integrand(i * h, j * h);
      }
    }
    return kp * sum * h * h;
  };

  double h = quad.initial_step;
  double prev = trapezoid(h);
  for (unsigned k = 0; k < quad.max_halvings; ++k) {
    h /= 2.0;
    const double cur = trapezoid(h);
    if (std::abs(cur - prev) <= quad.rel_tol * std::abs(cur)) {
      r.integral = cur;
      r.step = h;
      return r;
    }
    prev = cur;
  }
  throw ConvergenceError("gp_integral_norm: step halving did not reach the requested agreement");
}

}  // namespace vage
