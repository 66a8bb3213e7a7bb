#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vage/series.hpp"

namespace vage {

using ComplexMatrix = Eigen::MatrixXcd;

/// Dense matrix with entries in the truncated ring; all entries share one
/// window.
class RingMatrix {
 public:
  RingMatrix(std::size_t rows, std::size_t cols, TruncationSpec window);
  /// Row-major entries. Throws DomainError on shape or window mismatch.
  RingMatrix(std::size_t rows, std::size_t cols, std::vector<Series> entries);

  static RingMatrix identity(std::size_t n, TruncationSpec window);
  static RingMatrix constant(const ComplexMatrix& m, TruncationSpec window);
  static RingMatrix scalar(const Series& s);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const TruncationSpec& window() const noexcept { return window_; }
  const Series& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  Series& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const std::vector<Series>& entries() const noexcept { return e_; }

  /// Entrywise E[.]
  ComplexMatrix expectation() const;
  /// Max coefficient difference over all entries.
  double max_abs_diff(const RingMatrix& other) const;

 private:
  std::size_t rows_, cols_;
  TruncationSpec window_;
  std::vector<Series> e_;
};

RingMatrix mat_mul(const RingMatrix& x, const RingMatrix& y);
RingMatrix mat_add(const RingMatrix& x, const RingMatrix& y);
RingMatrix mat_sub(const RingMatrix& x, const RingMatrix& y);
/// Multiply every entry by the ring element s.
RingMatrix mat_scale(const Series& s, const RingMatrix& x);
RingMatrix mat_scale(Complex c, const RingMatrix& x);
/// Entrywise formal derivative in generator n.
RingMatrix mat_derive(Generator n, const RingMatrix& x);

/// Relative singular-value cutoff below which E[M] counts as singular.
inline constexpr double kSingularTol = 1e-12;

struct MatInverse {
  RingMatrix inverse;
  double condition;  // sigma_max / sigma_min of E[M]
};

/// M = E[M](I - K) with E[K] = 0, so M^{-1} = (sum_{n<=N} K^n) E[M]^{-1}
/// exactly on the window. Throws NotInvertibleError when E[M] is singular.
MatInverse mat_invert_report(const RingMatrix& m);
RingMatrix mat_invert(const RingMatrix& m);

/// R(z) = D + z C (I - zA)^{-1} B.
struct Realization {
  RingMatrix A, B, C, D;

  /// Throws DomainError when the shapes or windows are inconsistent.
  void validate() const;
  std::size_t state_dim() const noexcept { return A.rows(); }
  std::size_t outputs() const noexcept { return D.rows(); }
  std::size_t inputs() const noexcept { return D.cols(); }
  const TruncationSpec& window() const noexcept { return D.window(); }
};

Realization realization_sum(const Realization& r1, const Realization& r2);
Realization realization_product(const Realization& r1, const Realization& r2);
/// [R1; R2] (same number of inputs).
Realization realization_concat_col(const Realization& r1, const Realization& r2);
/// [R1, R2] (same number of outputs).
Realization realization_concat_row(const Realization& r1, const Realization& r2);
/// State matrix A - B D^{-1} C, B D^{-1}, -D^{-1} C, D^{-1}. Throws
/// NotInvertibleError when E[D] is singular.
Realization realization_inverse(const Realization& r);

/// D + f C (I - fA)^{-1} B. Throws DomainError when I - E[f]E[A] is
/// singular.
RingMatrix eval_realization(const Realization& r, const Series& f);

/// p(f) q(f)^{-1} with p(z) = sum p_m z^m and q(z) = sum q_m z^m (Horner in
/// the ring). Throws NotInvertibleError when sum E[q_m] E[f]^m == 0.
RingMatrix eval_rational_pq(const std::vector<RingMatrix>& p, const std::vector<Series>& q,
                            const Series& f);

/// Rank threshold relative to the largest singular value.
inline constexpr double kRankTol = 1e-10;

/// Rank of [Ce; Ce Ae; ...; Ce Ae^{N-1}].
std::size_t kalman_rank(const ComplexMatrix& ce, const ComplexMatrix& ae);
bool kalman_observable(const ComplexMatrix& ce, const ComplexMatrix& ae);

enum class WitnessStatus { found, not_found, inconclusive, zero_input };
const char* to_string(WitnessStatus s) noexcept;

struct ObservabilityWitness {
  WitnessStatus status = WitnessStatus::inconclusive;
  std::size_t k = 0;    // power of A
  std::size_t row = 0;  // output row
  MultiIndex alpha;     // coefficient location
  Complex value;
  std::size_t horizon = 0;  // N * window size
};

/// Searches C A^k f for k < horizon for a nonzero coefficient. f is an
/// N x 1 ring vector. Inconclusive when (E[C], E[A]) fails the Kalman test.
ObservabilityWitness observability_witness(const Realization& r, const RingMatrix& f);

struct ObservabilityTrials {
  WitnessStatus status = WitnessStatus::inconclusive;
  std::size_t trials = 0;
  std::size_t found = 0;
  std::size_t max_k = 0;
  std::uint64_t seed = 0;
  std::vector<ObservabilityWitness> witnesses;
};

/// Random nonzero f with unit-disk coefficients on a random subset of the
/// window, one per trial.
ObservabilityTrials observability_witness(const Realization& r, std::size_t trials,
                                          std::uint64_t seed);

}  // namespace vage
