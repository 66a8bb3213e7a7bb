#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vage/monoid.hpp"
#include "vage/weights.hpp"

namespace vage {

using Complex = std::complex<double>;

/// Coefficients below this magnitude are dropped (subnormal guard only).
inline constexpr double kZeroThreshold = 1e-300;
/// Per-coefficient absolute tolerance used by Series equality.
inline constexpr double kSeriesEqualityTol = 1e-14;

/// Truncated element f = sum_alpha f_alpha x^alpha of the convolution ring.
///
/// Every stored index lies inside the window; zero coefficients are never
/// stored. Iteration over terms() is in graded-lex order.
class Series {
 public:
  using Terms = std::map<MultiIndex, Complex, GradedLexLess>;

  explicit Series(TruncationSpec window) : window_(window) {}
  /// Throws DomainError if some index lies outside the window.
  Series(TruncationSpec window, Terms terms);

  static Series zero(TruncationSpec t) { return Series(t); }
  static Series constant(Complex c, TruncationSpec t);
  static Series one(TruncationSpec t) { return constant(1.0, t); }

  const TruncationSpec& window() const noexcept { return window_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  Complex coeff(const MultiIndex& alpha) const;
  /// Lowest total degree carrying a nonzero coefficient (nullopt for 0).
  std::optional<std::uint64_t> order() const;

  /// Max absolute coefficient difference over the union of supports.
  double max_abs_diff(const Series& other) const;
  bool approx_equal(const Series& other, double tol = kSeriesEqualityTol) const;
  friend bool operator==(const Series& a, const Series& b) { return a.approx_equal(b); }

  std::string to_string() const;

 private:
  TruncationSpec window_;
  Terms terms_;
};

/// c x^alpha. Throws DomainError when alpha is outside the window.
Series monomial(const MultiIndex& alpha, Complex c, const TruncationSpec& t);

/// (fg)_gamma = sum_{beta <= gamma} f_beta g_{gamma-beta} for in-window gamma.
Series convolve(const Series& f, const Series& g);
Series linear_combine(Complex c1, const Series& f, Complex c2, const Series& g);

Series operator+(const Series& f, const Series& g);
Series operator-(const Series& f, const Series& g);
Series operator-(const Series& f);
Series operator*(const Series& f, const Series& g);
Series operator*(Complex c, const Series& f);

/// (sum_alpha |f_alpha|^2 a_alpha^{-p})^{1/2} over stored terms; p may be
/// negative.
double norm_p(const Series& f, const WeightSpec& w, int p);

/// f_0
Complex expectation(const Series& f);

/// n-fold convolution, f^0 = 1.
Series power(const Series& f, unsigned n);

/// Exact truncated inverse by the triangular recursion
/// g_0 = 1/f_0, g_gamma = -(1/f_0) sum_{0<beta<=gamma} f_beta g_{gamma-beta}.
/// Throws NotInvertibleError when |f_0| <= 1e-300.
Series invert(const Series& f);

/// (1/f_0) sum_{n=0}^{terms} (1 - f/f_0)^n
Series neumann_invert(const Series& f, unsigned terms);

/// Formal partial derivative in generator n.
Series derive(Generator n, const Series& f);

/// Scalar power series phi(z) = sum phi_n z^n with radius of absolute
/// convergence `radius`.
struct PowerSeries {
  std::function<Complex(std::size_t)> coeff;
  double radius = std::numeric_limits<double>::infinity();
  /// Set for polynomials: coefficients past this index vanish.
  std::optional<std::size_t> degree;
  std::string name;

  static PowerSeries exp();
  static PowerSeries sin();
  static PowerSeries cos();
  /// 1/(1-z), radius 1.
  static PowerSeries geometric();
  /// log(1+z), radius 1.
  static PowerSeries log1p();
  static PowerSeries polynomial(std::vector<Complex> coeffs);
};

/// Convergence guard |E[f]| < R / A(d) for phi(f).
struct ComposeGuard {
  WeightSpec weight;
  unsigned d = 1;
};

/// phi(f) exact on the window. f is split as f_0 + h with E[h] = 0; only
/// h^k with k <= N survive, weighted by the scalar Taylor coefficients
/// sum_{n>=k} phi_n C(n,k) f_0^{n-k}, which are summed numerically.
/// Throws DomainError when the guard fails and ConvergenceError when a
/// scalar coefficient series does not settle within 10^6 terms.
Series compose(const PowerSeries& phi, const Series& f,
               const std::optional<ComposeGuard>& guard = std::nullopt);

}  // namespace vage
