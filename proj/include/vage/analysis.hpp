#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vage/monoid.hpp"
#include "vage/series.hpp"
#include "vage/weights.hpp"

namespace vage {

/// Relative slack for `holds`: both sides go through floating summation.
inline constexpr double kInequalityTol = 1e-9;

struct InequalityReport {
  double lhs = 0.0;       // ||fg||_p
  double rhs = 0.0;       // A(p-q) ||f||_q ||g||_p
  double ratio = 0.0;     // lhs / rhs (0 when rhs == 0)
  double constant = 0.0;  // A(p-q)
  /// True when A came from the infinite product, false when it is the
  /// window-restricted sum (non-exponential weights).
  bool closed_form = true;
  bool holds = true;
  int p = 0, q = 0, d = 0;
  std::optional<std::uint64_t> seed;
};

/// ||fg||_p <= A(p-q) ||f||_q ||g||_p. Requires p >= q + d and f, g on the
/// same window. For exponential weights A(p-q) is the closed form (throws
/// DivergenceError if infinite); otherwise the window-restricted constant,
/// which is exactly what the Cauchy-Schwarz step needs on truncated series.
InequalityReport check_vage(const Series& f, const Series& g, const WeightSpec& w, int p, int q,
                            int d);

/// Summary of check_vage over seeded random pairs.
struct VageSuiteReport {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;
  double constant = 0.0;
  std::optional<InequalityReport> worst;
  std::uint64_t seed = 0;
  TruncationSpec window;
  bool all_hold() const noexcept { return failures == 0; }
};

VageSuiteReport vage_random_suite(const WeightSpec& w, int p, int q, int d, std::size_t pairs,
                                  const TruncationSpec& window, std::uint64_t seed);

/// Coefficients uniform on the unit disk over the whole window, rescaled so
/// that ||f||_q = 1. Deterministic in `seed`.
Series random_series(const TruncationSpec& window, const WeightSpec& w, int q, std::uint64_t seed);

/// ||x^{n+m}||_p / (||x^n||_q ||x^m||_p) = a_{n+m}^{-p/2} a_n^{q/2} a_m^{p/2},
/// evaluated in log space.
double monomial_ratio(const WeightSpec& w, const MultiIndex& n, const MultiIndex& m, int p, int q);

struct SchwartzWitness {
  Exponent k = 0;  // n = m = k e_1
  double ratio = 0.0;
  unsigned probes = 0;
};

/// Doubles k from 1 until the Schwartz monomial ratio exceeds target.
SchwartzWitness demonstrate_schwartz_failure(int p, int q, double target);

/// prod_{n <= K} 1 / (1 - (2n)^{-d}), the Kondratiev A(d)^2 partial product.
double zhang_partial(unsigned d, std::uint64_t K);

}  // namespace vage
