#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vage {

using Generator = std::uint32_t;
using Exponent = std::uint32_t;

/// Element of the free commutative monoid over generators 1, 2, ...
///
/// Stored sparsely as (generator, exponent) pairs with strictly increasing
/// generators and positive exponents. The empty list is the identity 0.
class MultiIndex {
 public:
  using Entry = std::pair<Generator, Exponent>;

  MultiIndex() = default;

  /// Builds from arbitrary pairs; zero exponents are dropped and repeated
  /// generators are summed. Generator 0 is rejected.
  explicit MultiIndex(std::vector<Entry> entries);
  MultiIndex(std::initializer_list<Entry> entries)
      : MultiIndex(std::vector<Entry>(entries)) {}

  /// k * e_n
  static MultiIndex unit(Generator n, Exponent k = 1);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  std::size_t support_size() const noexcept { return entries_.size(); }
  std::uint64_t degree() const noexcept;
  /// Largest generator with a positive exponent, 0 for the identity.
  Generator max_generator() const noexcept;
  /// Exponent of generator n (0 when absent).
  Exponent operator[](Generator n) const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  /// Human-readable form such as "2e1+e3" ("0" for the identity).
  std::string to_string() const;

 private:
  std::vector<Entry> entries_;
};

MultiIndex add(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

/// a - b when b <= a componentwise, otherwise nullopt.
std::optional<MultiIndex> try_sub(const MultiIndex& a, const MultiIndex& b);

/// b <= a in the monoid order.
bool divides(const MultiIndex& b, const MultiIndex& a);

/// Graded-lexicographic order: lower total degree first; within a degree,
/// the dense exponent vector (a_1, a_2, ...) compared lexicographically with
/// larger vectors first, so e_1 precedes e_2.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const noexcept;
};

int graded_lex_compare(const MultiIndex& a, const MultiIndex& b) noexcept;

/// Truncation window: generators 1..max_generator, total degree <= max_degree.
struct TruncationSpec {
  Generator max_generator = 1;
  std::uint32_t max_degree = 0;

  bool contains(const MultiIndex& a) const noexcept;
  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

/// All in-window multi-indices in graded-lex order.
std::vector<MultiIndex> enumerate(const TruncationSpec& t);

/// Number of in-window multi-indices: sum_{d<=N} C(d+K-1, K-1).
std::uint64_t window_size(const TruncationSpec& t);

/// prod_k (alpha_k)!, as a double. Throws OverflowError past DBL_MAX.
double factorial(const MultiIndex& a);

}  // namespace vage

template <>
struct std::hash<vage::MultiIndex> {
  std::size_t operator()(const vage::MultiIndex& a) const noexcept;
};
