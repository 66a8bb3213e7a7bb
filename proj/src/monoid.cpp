#include "vage/monoid.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "vage/errors.hpp"

namespace vage {

MultiIndex::MultiIndex(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [g, e] : entries) {
    if (g == 0) throw DomainError("generator indices start at 1");
    if (e == 0) continue;
    if (!entries_.empty() && entries_.back().first == g) {
      entries_.back().second += e;
    } else {
      entries_.emplace_back(g, e);
    }
  }
}

MultiIndex MultiIndex::unit(Generator n, Exponent k) { return MultiIndex({{n, k}}); }

std::uint64_t MultiIndex::degree() const noexcept {
  std::uint64_t d = 0;
  for (const auto& [g, e] : entries_) d += e;
  return d;
}

Generator MultiIndex::max_generator() const noexcept {
  return entries_.empty() ? 0 : entries_.back().first;
}

Exponent MultiIndex::operator[](Generator n) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{n, 0});
  return (it != entries_.end() && it->first == n) ? it->second : 0;
}

std::string MultiIndex::to_string() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (const auto& [g, e] : entries_) {
    if (!s.empty()) s += '+';
    if (e != 1) s += std::to_string(e);
    s += 'e';
    s += std::to_string(g);
  }
  return s;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  std::vector<MultiIndex::Entry> out;
  out.reserve(a.entries().size() + b.entries().size());
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      out.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return MultiIndex(std::move(out));
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) { return add(a, b); }

std::optional<MultiIndex> try_sub(const MultiIndex& a, const MultiIndex& b) {
  std::vector<MultiIndex::Entry> out;
  auto ia = a.entries().begin(), ea = a.entries().end();
  for (const auto& [g, e] : b.entries()) {
    while (ia != ea && ia->first < g) out.push_back(*ia++);
    if (ia == ea || ia->first != g || ia->second < e) return std::nullopt;
    if (ia->second > e) out.emplace_back(g, ia->second - e);
    ++ia;
  }
  while (ia != ea) out.push_back(*ia++);
  return MultiIndex(std::move(out));
}

bool divides(const MultiIndex& b, const MultiIndex& a) {
  auto ia = a.entries().begin(), ea = a.entries().end();
  for (const auto& [g, e] : b.entries()) {
    while (ia != ea && ia->first < g) ++ia;
    if (ia == ea || ia->first != g || ia->second < e) return false;
  }
  return true;
}

int graded_lex_compare(const MultiIndex& a, const MultiIndex& b) noexcept {
  const auto da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  const auto& xa = a.entries();
  const auto& xb = b.entries();
  std::size_t i = 0;
  for (;; ++i) {
    const bool end_a = i == xa.size(), end_b = i == xb.size();
    if (end_a && end_b) return 0;
    if (end_a) return 1;
    if (end_b) return -1;
    if (xa[i].first != xb[i].first) return xa[i].first < xb[i].first ? -1 : 1;
    if (xa[i].second != xb[i].second) return xa[i].second > xb[i].second ? -1 : 1;
  }
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const noexcept {
  return graded_lex_compare(a, b) < 0;
}

bool TruncationSpec::contains(const MultiIndex& a) const noexcept {
  return a.max_generator() <= max_generator && a.degree() <= max_degree;
}

namespace {

// Compositions of `remaining` over generators [g, K], dense vectors in
// lexicographically decreasing order.
void compositions(Generator g, Generator K, std::uint32_t remaining,
                  std::vector<MultiIndex::Entry>& prefix, std::vector<MultiIndex>& out) {
  if (g == K) {
    if (remaining > 0) prefix.emplace_back(g, remaining);
    out.emplace_back(prefix);
    if (remaining > 0) prefix.pop_back();
    return;
  }
  for (std::uint32_t e = remaining + 1; e-- > 0;) {
    if (e > 0) prefix.emplace_back(g, e);
    compositions(g + 1, K, remaining - e, prefix, out);
    if (e > 0) prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate(const TruncationSpec& t) {
  std::vector<MultiIndex> out;
  if (t.max_generator == 0) {
    out.emplace_back();
    return out;
  }
  out.reserve(window_size(t));
  std::vector<MultiIndex::Entry> prefix;
  for (std::uint32_t d = 0; d <= t.max_degree; ++d) {
    compositions(1, t.max_generator, d, prefix, out);
  }
  return out;
}

std::uint64_t window_size(const TruncationSpec& t) {
  if (t.max_generator == 0) return 1;
  // C(N+K, K) counts all degrees <= N at once.
  const std::uint64_t K = t.max_generator, N = t.max_degree;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= std::min(K, N); ++i) c = c * (K + N - std::min(K, N) + i) / i;
  return c;
}

double factorial(const MultiIndex& a) {
  double r = 1.0;
  for (const auto& [g, e] : a.entries()) {
    for (Exponent k = 2; k <= e; ++k) {
      r *= static_cast<double>(k);
      if (!std::isfinite(r) || r > DBL_MAX) {
        throw OverflowError("factorial of " + a.to_string() + " exceeds double range");
      }
    }
  }
  return r;
}

}  // namespace vage

std::size_t std::hash<vage::MultiIndex>::operator()(const vage::MultiIndex& a) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& [g, e] : a.entries()) {
    h ^= (static_cast<std::size_t>(g) << 32 | e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}
