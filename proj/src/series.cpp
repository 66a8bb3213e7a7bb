#include "vage/series.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "vage/errors.hpp"

namespace vage {

namespace {

// Dense view of a window: graded-lex position of every index, and (for
// small windows) the table pos(alpha) x pos(beta) -> pos(alpha+beta).
class WindowIndex {
 public:
  static constexpr std::size_t kMaxTabulated = 2048;
  static constexpr std::int32_t kOutside = -1;

  explicit WindowIndex(const TruncationSpec& t) : indices_(enumerate(t)) {
    pos_.reserve(indices_.size());
    degree_.reserve(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      pos_.emplace(indices_[i], static_cast<std::int32_t>(i));
      degree_.push_back(static_cast<std::uint32_t>(indices_[i].degree()));
    }
    if (indices_.size() <= kMaxTabulated) {
      const std::size_t n = indices_.size();
      table_.assign(n * n, kOutside);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (degree_[i] + degree_[j] > t.max_degree) continue;
          table_[i * n + j] = pos_.at(indices_[i] + indices_[j]);
        }
      }
    }
  }

  static std::shared_ptr<const WindowIndex> get(const TruncationSpec& t) {
    static std::mutex mu;
    static std::map<std::pair<Generator, std::uint32_t>, std::shared_ptr<const WindowIndex>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{t.max_generator, t.max_degree}];
    if (!slot) slot = std::make_shared<const WindowIndex>(t);
    return slot;
  }

  std::size_t size() const noexcept { return indices_.size(); }
  bool tabulated() const noexcept { return !table_.empty(); }
  const MultiIndex& index(std::size_t i) const { return indices_[i]; }
  std::uint32_t degree(std::size_t i) const { return degree_[i]; }
  std::int32_t position(const MultiIndex& a) const {
    auto it = pos_.find(a);
    return it == pos_.end() ? kOutside : it->second;
  }
  std::int32_t sum(std::size_t i, std::size_t j) const { return table_[i * indices_.size() + j]; }

  std::vector<Complex> to_dense(const Series& f) const {
    std::vector<Complex> v(indices_.size());
    for (const auto& [a, c] : f.terms()) v[pos_.at(a)] = c;
    return v;
  }

  Series from_dense(const TruncationSpec& t, const std::vector<Complex>& v) const {
    Series::Terms terms;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) >= kZeroThreshold) terms.emplace_hint(terms.end(), indices_[i], v[i]);
    }
    return Series(t, std::move(terms));
  }

 private:
  std::vector<MultiIndex> indices_;
  std::unordered_map<MultiIndex, std::int32_t> pos_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::int32_t> table_;
};

void require_same_window(const Series& f, const Series& g, const char* op) {
  if (!(f.window() == g.window())) {
    throw DomainError(std::string(op) + ": window mismatch (K=" +
                      std::to_string(f.window().max_generator) + ",N=" +
                      std::to_string(f.window().max_degree) + " vs K=" +
                      std::to_string(g.window().max_generator) + ",N=" +
                      std::to_string(g.window().max_degree) + ")");
  }
}

void accumulate(Series::Terms& terms, const MultiIndex& a, Complex c) {
  auto [it, inserted] = terms.try_emplace(a, c);
  if (!inserted) it->second += c;
}

void prune(Series::Terms& terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    it = std::abs(it->second) < kZeroThreshold ? terms.erase(it) : std::next(it);
  }
}

}  // namespace

Series::Series(TruncationSpec window, Terms terms) : window_(window), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (!window_.contains(it->first)) {
      throw DomainError("index " + it->first.to_string() + " lies outside the window (K=" +
                        std::to_string(window_.max_generator) +
                        ",N=" + std::to_string(window_.max_degree) + ")");
    }
    it = std::abs(it->second) < kZeroThreshold ? terms_.erase(it) : std::next(it);
  }
}

Series Series::constant(Complex c, TruncationSpec t) { return monomial(MultiIndex{}, c, t); }

Complex Series::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Complex{} : it->second;
}

std::optional<std::uint64_t> Series::order() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.degree();
}

double Series::max_abs_diff(const Series& other) const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c - other.coeff(a)));
  for (const auto& [a, c] : other.terms_) {
    if (!terms_.count(a)) m = std::max(m, std::abs(c));
  }
  return m;
}

bool Series::approx_equal(const Series& other, double tol) const {
  return window_ == other.window_ && max_abs_diff(other) <= tol;
}

std::string Series::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [a, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (const auto& [g, e] : a.entries()) {
      os << "*x" << g;
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

Series monomial(const MultiIndex& alpha, Complex c, const TruncationSpec& t) {
  if (!t.contains(alpha)) {
    throw DomainError("monomial index " + alpha.to_string() + " lies outside the window");
  }
  Series::Terms terms;
  terms.emplace(alpha, c);
  return Series(t, std::move(terms));
}

Series convolve(const Series& f, const Series& g) {
  require_same_window(f, g, "convolve");
  const auto& t = f.window();
  if (f.is_zero() || g.is_zero()) return Series(t);
  const auto idx = WindowIndex::get(t);
  if (idx->tabulated()) {
    // Fixed loop order per output index keeps the summation deterministic.
    std::vector<std::pair<std::size_t, Complex>> fs, gs;
    for (const auto& [a, c] : f.terms()) fs.emplace_back(idx->position(a), c);
    for (const auto& [a, c] : g.terms()) gs.emplace_back(idx->position(a), c);
    std::vector<Complex> out(idx->size());
    for (const auto& [i, fc] : fs) {
      for (const auto& [j, gc] : gs) {
        const auto k = idx->sum(i, j);
        if (k == WindowIndex::kOutside) {
          // gs is in graded order: once past the degree budget, stop.
          if (idx->degree(i) + idx->degree(j) > t.max_degree) break;
          continue;
        }
        out[k] += fc * gc;
      }
    }
    return idx->from_dense(t, out);
  }
  Series::Terms terms;
  for (const auto& [a, fc] : f.terms()) {
    for (const auto& [b, gc] : g.terms()) {
      if (a.degree() + b.degree() > t.max_degree) break;
      accumulate(terms, a + b, fc * gc);
    }
  }
  prune(terms);
  return Series(t, std::move(terms));
}

Series linear_combine(Complex c1, const Series& f, Complex c2, const Series& g) {
  require_same_window(f, g, "linear_combine");
  Series::Terms terms;
  for (const auto& [a, c] : f.terms()) accumulate(terms, a, c1 * c);
  for (const auto& [a, c] : g.terms()) accumulate(terms, a, c2 * c);
  prune(terms);
  return Series(f.window(), std::move(terms));
}

Series operator+(const Series& f, const Series& g) { return linear_combine(1.0, f, 1.0, g); }
Series operator-(const Series& f, const Series& g) { return linear_combine(1.0, f, -1.0, g); }
Series operator-(const Series& f) { return -1.0 * f; }
Series operator*(const Series& f, const Series& g) { return convolve(f, g); }

Series operator*(Complex c, const Series& f) {
  Series::Terms terms;
  for (const auto& [a, x] : f.terms()) terms.emplace_hint(terms.end(), a, c * x);
  return Series(f.window(), std::move(terms));
}

double norm_p(const Series& f, const WeightSpec& w, int p) {
  double s = 0.0;
  for (const auto& [a, c] : f.terms()) {
    s += std::norm(c) * std::exp(-static_cast<double>(p) * w.log_eval(a));
  }
  return std::sqrt(s);
}

Complex expectation(const Series& f) { return f.coeff(MultiIndex{}); }

Series power(const Series& f, unsigned n) {
  Series r = Series::one(f.window());
  for (unsigned k = 0; k < n; ++k) r = convolve(f, r);
  return r;
}

Series invert(const Series& f) {
  const Complex f0 = expectation(f);
  if (!(std::abs(f0) > kZeroThreshold)) {
    throw NotInvertibleError("E[f] = 0: f is not invertible");
  }
  const auto& t = f.window();
  const Complex inv0 = 1.0 / f0;
  const auto idx = WindowIndex::get(t);
  if (idx->tabulated()) {
    std::vector<std::pair<std::size_t, Complex>> fs;
    for (const auto& [a, c] : f.terms()) {
      if (!a.is_zero()) fs.emplace_back(idx->position(a), c);
    }
    // acc[k] collects sum_{0<beta} f_beta g_{k-beta}; every contribution to
    // position k comes from a strictly lower degree, hence is final in time.
    std::vector<Complex> g(idx->size()), acc(idx->size());
    for (std::size_t k = 0; k < idx->size(); ++k) {
      g[k] = ((k == 0 ? Complex(1.0) : Complex{}) - acc[k]) * inv0;
      if (g[k] == Complex{}) continue;
      for (const auto& [b, fc] : fs) {
        const auto s = idx->sum(k, b);
        if (s != WindowIndex::kOutside) acc[s] += fc * g[k];
      }
    }
    return idx->from_dense(t, g);
  }
  Series::Terms g;
  for (const auto& gamma : enumerate(t)) {
    Complex acc = gamma.is_zero() ? Complex(1.0) : Complex{};
    for (const auto& [b, fc] : f.terms()) {
      if (b.is_zero()) continue;
      if (b.degree() > gamma.degree()) break;
      if (auto rest = try_sub(gamma, b)) {
        auto it = g.find(*rest);
        if (it != g.end()) acc -= fc * it->second;
      }
    }
    const Complex v = acc * inv0;
    if (std::abs(v) >= kZeroThreshold) g.emplace_hint(g.end(), gamma, v);
  }
  return Series(t, std::move(g));
}

Series neumann_invert(const Series& f, unsigned terms) {
  const Complex f0 = expectation(f);
  if (!(std::abs(f0) > kZeroThreshold)) {
    throw NotInvertibleError("E[f] = 0: f is not invertible");
  }
  const auto& t = f.window();
  const Series k = Series::one(t) - (1.0 / f0) * f;
  // Horner: 1 + k(1 + k(1 + ...)).
  Series s = Series::one(t);
  for (unsigned n = 0; n < terms; ++n) s = Series::one(t) + convolve(k, s);
  return (1.0 / f0) * s;
}

Series derive(Generator n, const Series& f) {
  Series::Terms terms;
  for (const auto& [a, c] : f.terms()) {
    const Exponent e = a[n];
    if (e == 0) continue;
    auto lowered = try_sub(a, MultiIndex::unit(n));
    accumulate(terms, *lowered, static_cast<double>(e) * c);
  }
  prune(terms);
  return Series(f.window(), std::move(terms));
}

PowerSeries PowerSeries::exp() {
  return {[](std::size_t n) { return Complex(1.0 / std::tgamma(static_cast<double>(n) + 1.0)); },
          std::numeric_limits<double>::infinity(), std::nullopt, "exp"};
}

PowerSeries PowerSeries::sin() {
  return {[](std::size_t n) {
            if (n % 2 == 0) return Complex{};
            const double s = (n / 2) % 2 == 0 ? 1.0 : -1.0;
            return Complex(s / std::tgamma(static_cast<double>(n) + 1.0));
          },
          std::numeric_limits<double>::infinity(), std::nullopt, "sin"};
}

PowerSeries PowerSeries::cos() {
  return {[](std::size_t n) {
            if (n % 2 == 1) return Complex{};
            const double s = (n / 2) % 2 == 0 ? 1.0 : -1.0;
            return Complex(s / std::tgamma(static_cast<double>(n) + 1.0));
          },
          std::numeric_limits<double>::infinity(), std::nullopt, "cos"};
}

PowerSeries PowerSeries::geometric() {
  return {[](std::size_t) { return Complex(1.0); }, 1.0, std::nullopt, "geometric"};
}

PowerSeries PowerSeries::log1p() {
  return {[](std::size_t n) {
            if (n == 0) return Complex{};
            return Complex((n % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(n));
          },
          1.0, std::nullopt, "log1p"};
}

PowerSeries PowerSeries::polynomial(std::vector<Complex> coeffs) {
  const std::size_t deg = coeffs.empty() ? 0 : coeffs.size() - 1;
  auto shared = std::make_shared<const std::vector<Complex>>(std::move(coeffs));
  return {[shared](std::size_t n) { return n < shared->size() ? (*shared)[n] : Complex{}; },
          std::numeric_limits<double>::infinity(), deg, "polynomial"};
}

namespace {

constexpr std::size_t kMaxScalarTerms = 1'000'000;
constexpr double kScalarIncrementTol = 1e-15;
// Consecutive small increments required before stopping; coefficient
// sequences with parity gaps (sin, cos) need more than one.
constexpr int kSettleRun = 8;

// sum_{n>=k} phi_n C(n,k) c^{n-k}, the k-th Taylor coefficient of phi at c.
Complex taylor_coefficient(const PowerSeries& phi, std::size_t k, Complex c) {
  if (phi.degree) {
    Complex sum{}, b(1.0);
    for (std::size_t n = k; n <= *phi.degree; ++n) {
      sum += phi.coeff(n) * b;
      b *= c * static_cast<double>(n + 1) / static_cast<double>(n + 1 - k);
    }
    return sum;
  }
  if (c == Complex{}) return phi.coeff(k);
  Complex sum{}, b(1.0);
  int run = 0;
  for (std::size_t n = k; n < k + kMaxScalarTerms; ++n) {
    const Complex term = phi.coeff(n) * b;
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
      throw ConvergenceError("scalar series for " + phi.name + " overflowed at n=" +
                             std::to_string(n));
    }
    sum += term;
    run = std::abs(term) < kScalarIncrementTol * std::max(1.0, std::abs(sum)) ? run + 1 : 0;
    if (run >= kSettleRun) return sum;
    b *= c * static_cast<double>(n + 1) / static_cast<double>(n + 1 - k);
  }
  throw ConvergenceError("scalar series for " + phi.name + " at E[f] did not settle within " +
                         std::to_string(kMaxScalarTerms) + " terms");
}

}  // namespace

Series compose(const PowerSeries& phi, const Series& f, const std::optional<ComposeGuard>& guard) {
  const auto& t = f.window();
  const Complex c = expectation(f);
  if (guard && std::isfinite(phi.radius)) {
    const double A = vage_constant_closed_form(guard->weight, guard->d);
    if (!(std::abs(c) < phi.radius / A)) {
      throw DomainError("|E[f]| = " + std::to_string(std::abs(c)) + " is not below R/A(d) = " +
                        std::to_string(phi.radius / A));
    }
  }
  const Series h = f - Series::constant(c, t);
  Series result = Series::constant(taylor_coefficient(phi, 0, c), t);
  Series hk = Series::one(t);
  // h^k has order >= k, so k <= N exhausts the window.
  for (std::size_t k = 1; k <= t.max_degree && !h.is_zero(); ++k) {
    hk = convolve(h, hk);
    if (hk.is_zero()) break;
    result = result + taylor_coefficient(phi, k, c) * hk;
  }
  return result;
}

}  // namespace vage
