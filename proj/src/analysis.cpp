#include "vage/analysis.hpp"

#include <cmath>
#include <random>

#include "vage/errors.hpp"

namespace vage {

namespace {

double window_constant(const WeightSpec& w, unsigned d, const TruncationSpec& t, bool& closed) {
  if (w.classification().exponential) {
    closed = true;
    return vage_constant_closed_form(w, d);
  }
  closed = false;
  return vage_constant_partial(w, d, t);
}

InequalityReport finish(InequalityReport r) {
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? INFINITY : 0.0);
  r.holds = r.ratio <= 1.0 + kInequalityTol;
  return r;
}

}  // namespace

InequalityReport check_vage(const Series& f, const Series& g, const WeightSpec& w, int p, int q,
                            int d) {
  if (d < 1) throw DomainError("check_vage: index d must be >= 1");
  if (p < q + d) throw DomainError("check_vage: requires p >= q + d");
  if (!(f.window() == g.window())) throw DomainError("check_vage: series windows differ");
  InequalityReport r;
  r.p = p;
  r.q = q;
  r.d = d;
  r.constant = window_constant(w, static_cast<unsigned>(p - q), f.window(), r.closed_form);
  r.lhs = norm_p(f * g, w, p);
  r.rhs = r.constant * norm_p(f, w, q) * norm_p(g, w, p);
  return finish(r);
}

Series random_series(const TruncationSpec& window, const WeightSpec& w, int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Series::Terms terms;
  for (const auto& a : enumerate(window)) {
    double x, y;
    do {
      x = u(rng);
      y = u(rng);
    } while (x * x + y * y > 1.0);
    terms.emplace(a, Complex(x, y));
  }
  Series f(window, std::move(terms));
  const double n = norm_p(f, w, q);
  return n > 0.0 ? Complex(1.0 / n) * f : f;
}

VageSuiteReport vage_random_suite(const WeightSpec& w, int p, int q, int d, std::size_t pairs,
                                  const TruncationSpec& window, std::uint64_t seed) {
  VageSuiteReport out;
  out.seed = seed;
  out.window = window;
  std::mt19937_64 seeds(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::uint64_t sf = seeds(), sg = seeds();
    auto r = check_vage(random_series(window, w, q, sf), random_series(window, w, p, sg), w, p, q, d);
    r.seed = seed;
    ++out.pairs;
    out.constant = r.constant;
    if (!r.holds) ++out.failures;
    if (!out.worst || r.ratio > out.max_ratio) {
      out.max_ratio = r.ratio;
      out.worst = r;
    }
  }
  return out;
}

double monomial_ratio(const WeightSpec& w, const MultiIndex& n, const MultiIndex& m, int p, int q) {
  const double lg = -0.5 * p * w.log_eval(n + m) + 0.5 * q * w.log_eval(n) + 0.5 * p * w.log_eval(m);
  return std::exp(lg);
}

SchwartzWitness demonstrate_schwartz_failure(int p, int q, double target) {
  if (!(target >= 0.0)) throw DomainError("demonstrate_schwartz_failure: target must be >= 0");
  if (q < 1) throw DomainError("demonstrate_schwartz_failure: ratio only grows for q >= 1");
  const auto w = WeightSpec::schwartz();
  SchwartzWitness out;
  for (Exponent k = 1;; k *= 2) {
    ++out.probes;
    const auto e = MultiIndex::unit(1, k);
    out.k = k;
    out.ratio = monomial_ratio(w, e, e, p, q);
    if (out.ratio > target) return out;
    if (k > (Exponent(1) << 30)) throw ConvergenceError("demonstrate_schwartz_failure: k overflow");
  }
}

double zhang_partial(unsigned d, std::uint64_t K) {
  if (d == 0) throw DomainError("zhang_partial: d must be positive");
  double s = 0.0;
  for (std::uint64_t n = K; n >= 1; --n) s -= std::log1p(-std::pow(2.0 * double(n), -double(d)));
  return std::exp(s);
}

}  // namespace vage
