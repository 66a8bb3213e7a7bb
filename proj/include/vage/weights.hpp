#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vage/monoid.hpp"

namespace vage {

enum class WeightFamily {
  schwartz,            // a_n = (n+1)^2 on a single generator
  gspace,              // a_n = 2^n on a single generator
  kondratiev,          // a_alpha = (2N)^alpha = prod (2k)^{alpha_k}
  doubly_exponential,  // a_0 = 1, a_n = 2^(2^n) on a single generator
  power,               // a_n = c^n on a single generator
  custom_generators,   // a_alpha = prod w_k^{alpha_k}, k = 1..len(w)
  tensor,              // interleaved product of two weights
};

const char* to_string(WeightFamily f) noexcept;

/// Analytically known classification of a weight family. Admissibility of
/// power / custom weights depends on the parameters and is folded in.
struct WeightClass {
  bool admissible = false;
  bool exponential = false;
  bool superexponential = false;
  /// Smallest d for which the weight is d-regular; nullopt when no d works.
  std::optional<unsigned> min_regular_d;
};

/// A positive function alpha -> a_alpha on the free commutative monoid.
///
/// Immutable value type; tensor weights share their parts.
class WeightSpec {
 public:
  static WeightSpec schwartz();
  static WeightSpec gspace();
  static WeightSpec kondratiev();
  static WeightSpec doubly_exponential();
  static WeightSpec power(double c);
  static WeightSpec custom_generators(std::vector<double> w);
  static WeightSpec tensor(WeightSpec left, WeightSpec right);

  WeightFamily family() const noexcept { return family_; }
  double c() const noexcept { return c_; }
  const std::vector<double>& generator_weights() const noexcept { return w_; }
  const WeightSpec& left() const;
  const WeightSpec& right() const;

  /// Whether generator n carries a weight (single-generator families only
  /// know generator 1; tensor domains interleave the parts' domains).
  bool in_domain(Generator n) const noexcept;
  /// Largest generator in the domain, nullopt when unbounded.
  std::optional<Generator> max_generator() const noexcept;
  /// Domain generators in [1, K].
  std::vector<Generator> generators_up_to(Generator K) const;

  /// a_alpha. Throws DomainError outside the domain, OverflowError past
  /// double range.
  double eval(const MultiIndex& alpha) const;
  /// log a_alpha; never overflows.
  double log_eval(const MultiIndex& alpha) const;
  /// a_{e_n}
  double generator_weight(Generator n) const { return eval(MultiIndex::unit(n)); }

  WeightClass classification() const;

  std::string describe() const;

  friend bool operator==(const WeightSpec& a, const WeightSpec& b);

 private:
  WeightSpec(WeightFamily f) : family_(f) {}

  void check_domain(const MultiIndex& alpha) const;

  WeightFamily family_;
  double c_ = 0.0;
  std::vector<double> w_;
  std::shared_ptr<const std::pair<WeightSpec, WeightSpec>> parts_;
};

/// Projections of a tensor multi-index: odd generators 2k-1 belong to the
/// left factor (as k), even generators 2k to the right factor (as k).
std::pair<MultiIndex, MultiIndex> split_tensor_index(const MultiIndex& gamma);
MultiIndex join_tensor_index(const MultiIndex& left, const MultiIndex& right);

struct AdmissibilityViolation {
  Generator generator = 0;  // 0 denotes the a_0 = 1 check
  double value = 0.0;
};

struct AdmissibilityReport {
  bool ok = true;
  std::vector<AdmissibilityViolation> violations;
  TruncationSpec probe;
};

/// a_0 == 1 and a_{e_n} > 1 for every domain generator n <= probe.max_generator.
AdmissibilityReport is_admissible(const WeightSpec& w, const TruncationSpec& probe);

/// sum_{n <= K, n in domain} 1 / (a_{e_n}^d - 1). With d = q - p this is the
/// trace partial sum deciding nuclearity of the embedding. Throws DomainError
/// when some a_{e_n} <= 1.
double regularity_sum(const WeightSpec& w, unsigned d, Generator K);

struct SuperexponentialReport {
  bool ok = true;
  std::optional<std::pair<MultiIndex, MultiIndex>> witness;
  double lhs = 0.0;  // a_alpha a_beta at the witness
  double rhs = 0.0;  // a_{alpha+beta} at the witness
  TruncationSpec window;
  std::size_t pairs_tested = 0;
};

/// Relative slack applied to every <= comparison of weights.
inline constexpr double kWeightSlack = 1e-12;

/// Tests a_alpha a_beta <= a_{alpha+beta} (1 + slack) for every pair with
/// alpha, beta, alpha+beta in the window (restricted to the domain). The
/// first failing pair in graded-lex order is reported.
SuperexponentialReport check_superexponential(const WeightSpec& w, const TruncationSpec& probe);

/// A(d) = (sum_alpha a_alpha^{-d})^{1/2} for exponential weights, from the
/// product prod_n 1/(1 - a_{e_n}^{-d}). Throws DivergenceError when the
/// weight is not d-regular, DomainError for non-exponential weights.
double vage_constant_closed_form(const WeightSpec& w, unsigned d);

/// Window-restricted lower bound (sum_{alpha in window} a_alpha^{-d})^{1/2};
/// works for every weight.
double vage_constant_partial(const WeightSpec& w, unsigned d, const TruncationSpec& window);

/// Interleaved tensor weight: c_gamma = a_{P_A gamma} b_{P_B gamma}.
WeightSpec tensor_combine(const WeightSpec& a, const WeightSpec& b);

}  // namespace vage
