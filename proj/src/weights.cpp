#include "vage/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vage/errors.hpp"

namespace vage {

const char* to_string(WeightFamily f) noexcept {
  switch (f) {
    case WeightFamily::schwartz: return "schwartz";
    case WeightFamily::gspace: return "gspace";
    case WeightFamily::kondratiev: return "kondratiev";
    case WeightFamily::doubly_exponential: return "doubly_exponential";
    case WeightFamily::power: return "power";
    case WeightFamily::custom_generators: return "custom_generators";
    case WeightFamily::tensor: return "tensor";
  }
  return "?";
}

WeightSpec WeightSpec::schwartz() { return WeightSpec(WeightFamily::schwartz); }
WeightSpec WeightSpec::gspace() { return WeightSpec(WeightFamily::gspace); }
WeightSpec WeightSpec::kondratiev() { return WeightSpec(WeightFamily::kondratiev); }
WeightSpec WeightSpec::doubly_exponential() { return WeightSpec(WeightFamily::doubly_exponential); }

WeightSpec WeightSpec::power(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("power weight needs a finite c > 0");
  WeightSpec w(WeightFamily::power);
  w.c_ = c;
  return w;
}

WeightSpec WeightSpec::custom_generators(std::vector<double> ws) {
  if (ws.empty()) throw DomainError("custom_generators needs at least one generator weight");
  for (double x : ws) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError("custom generator weights must be finite and positive");
    }
  }
  WeightSpec w(WeightFamily::custom_generators);
  w.w_ = std::move(ws);
  return w;
}

WeightSpec WeightSpec::tensor(WeightSpec left, WeightSpec right) {
  WeightSpec w(WeightFamily::tensor);
  w.parts_ = std::make_shared<const std::pair<WeightSpec, WeightSpec>>(std::move(left),
                                                                       std::move(right));
  return w;
}

WeightSpec tensor_combine(const WeightSpec& a, const WeightSpec& b) { return WeightSpec::tensor(a, b); }

const WeightSpec& WeightSpec::left() const {
  if (!parts_) throw DomainError("not a tensor weight");
  return parts_->first;
}

const WeightSpec& WeightSpec::right() const {
  if (!parts_) throw DomainError("not a tensor weight");
  return parts_->second;
}

bool operator==(const WeightSpec& a, const WeightSpec& b) {
  if (a.family_ != b.family_) return false;
  switch (a.family_) {
    case WeightFamily::power: return a.c_ == b.c_;
    case WeightFamily::custom_generators: return a.w_ == b.w_;
    case WeightFamily::tensor: return a.left() == b.left() && a.right() == b.right();
    default: return true;
  }
}

bool WeightSpec::in_domain(Generator n) const noexcept {
  if (n == 0) return false;
  switch (family_) {
    case WeightFamily::kondratiev: return true;
    case WeightFamily::custom_generators: return n <= w_.size();
    case WeightFamily::tensor:
      return (n % 2 == 1) ? parts_->first.in_domain((n + 1) / 2) : parts_->second.in_domain(n / 2);
    default: return n == 1;
  }
}

std::optional<Generator> WeightSpec::max_generator() const noexcept {
  switch (family_) {
    case WeightFamily::kondratiev: return std::nullopt;
    case WeightFamily::custom_generators: return static_cast<Generator>(w_.size());
    case WeightFamily::tensor: {
      auto l = parts_->first.max_generator();
      auto r = parts_->second.max_generator();
      if (!l || !r) return std::nullopt;
      return std::max(2 * *l - 1, 2 * *r);
    }
    default: return 1;
  }
}

std::vector<Generator> WeightSpec::generators_up_to(Generator K) const {
  std::vector<Generator> out;
  const Generator hi = std::min<Generator>(K, max_generator().value_or(K));
  for (Generator n = 1; n <= hi; ++n) {
    if (in_domain(n)) out.push_back(n);
  }
  return out;
}

std::pair<MultiIndex, MultiIndex> split_tensor_index(const MultiIndex& gamma) {
  std::vector<MultiIndex::Entry> l, r;
  for (const auto& [g, e] : gamma.entries()) {
    if (g % 2 == 1) {
      l.emplace_back((g + 1) / 2, e);
    } else {
      r.emplace_back(g / 2, e);
    }
  }
  return {MultiIndex(std::move(l)), MultiIndex(std::move(r))};
}

MultiIndex join_tensor_index(const MultiIndex& left, const MultiIndex& right) {
  std::vector<MultiIndex::Entry> out;
  for (const auto& [g, e] : left.entries()) out.emplace_back(2 * g - 1, e);
  for (const auto& [g, e] : right.entries()) out.emplace_back(2 * g, e);
  return MultiIndex(std::move(out));
}

void WeightSpec::check_domain(const MultiIndex& alpha) const {
  for (const auto& [g, e] : alpha.entries()) {
    if (!in_domain(g)) {
      throw DomainError("generator " + std::to_string(g) + " is outside the domain of the " +
                        to_string(family_) + " weight");
    }
  }
}

namespace {

double checked(double v, const MultiIndex& alpha, WeightFamily f) {
  if (!std::isfinite(v)) {
    throw OverflowError(std::string("weight ") + to_string(f) + " at " + alpha.to_string() +
                        " exceeds double range");
  }
  return v;
}

}  // namespace

double WeightSpec::eval(const MultiIndex& alpha) const {
  check_domain(alpha);
  if (alpha.is_zero()) return 1.0;
  switch (family_) {
    case WeightFamily::schwartz: {
      const double k = alpha[1];
      return checked((k + 1.0) * (k + 1.0), alpha, family_);
    }
    case WeightFamily::gspace:
      return checked(std::ldexp(1.0, static_cast<int>(std::min<Exponent>(alpha[1], 4096))), alpha,
                     family_);
    case WeightFamily::kondratiev: {
      double v = 1.0;
      for (const auto& [g, e] : alpha.entries()) v *= std::pow(2.0 * g, static_cast<double>(e));
      return checked(v, alpha, family_);
    }
    case WeightFamily::doubly_exponential: {
      const Exponent k = alpha[1];
      if (k >= 10) checked(std::numeric_limits<double>::infinity(), alpha, family_);
      return std::ldexp(1.0, 1 << k);
    }
    case WeightFamily::power:
      return checked(std::pow(c_, static_cast<double>(alpha[1])), alpha, family_);
    case WeightFamily::custom_generators: {
      double v = 1.0;
      for (const auto& [g, e] : alpha.entries()) v *= std::pow(w_[g - 1], static_cast<double>(e));
      return checked(v, alpha, family_);
    }
    case WeightFamily::tensor: {
      const auto [l, r] = split_tensor_index(alpha);
      return checked(parts_->first.eval(l) * parts_->second.eval(r), alpha, family_);
    }
  }
  return 1.0;
}

double WeightSpec::log_eval(const MultiIndex& alpha) const {
  check_domain(alpha);
  if (alpha.is_zero()) return 0.0;
  switch (family_) {
    case WeightFamily::schwartz: return 2.0 * std::log1p(static_cast<double>(alpha[1]));
    case WeightFamily::gspace: return alpha[1] * std::log(2.0);
    case WeightFamily::kondratiev: {
      double v = 0.0;
      for (const auto& [g, e] : alpha.entries()) v += e * std::log(2.0 * g);
      return v;
    }
    case WeightFamily::doubly_exponential: return std::ldexp(std::log(2.0), static_cast<int>(alpha[1]));
    case WeightFamily::power: return alpha[1] * std::log(c_);
    case WeightFamily::custom_generators: {
      double v = 0.0;
      for (const auto& [g, e] : alpha.entries()) v += e * std::log(w_[g - 1]);
      return v;
    }
    case WeightFamily::tensor: {
      const auto [l, r] = split_tensor_index(alpha);
      return parts_->first.log_eval(l) + parts_->second.log_eval(r);
    }
  }
  return 0.0;
}

WeightClass WeightSpec::classification() const {
  switch (family_) {
    case WeightFamily::schwartz: return {true, false, false, 1u};
    case WeightFamily::gspace: return {true, true, true, 1u};
    case WeightFamily::kondratiev: return {true, true, true, 2u};
    case WeightFamily::doubly_exponential: return {true, false, true, 1u};
    case WeightFamily::power: {
      const bool adm = c_ > 1.0;
      return {adm, true, adm, adm ? std::optional<unsigned>(1u) : std::nullopt};
    }
    case WeightFamily::custom_generators: {
      const bool adm = std::all_of(w_.begin(), w_.end(), [](double x) { return x > 1.0; });
      return {adm, true, adm, adm ? std::optional<unsigned>(1u) : std::nullopt};
    }
    case WeightFamily::tensor: {
      const auto l = parts_->first.classification();
      const auto r = parts_->second.classification();
      WeightClass c;
      c.admissible = l.admissible && r.admissible;
      c.exponential = l.exponential && r.exponential;
      c.superexponential = l.superexponential && r.superexponential;
      if (l.min_regular_d && r.min_regular_d) {
        c.min_regular_d = std::max(*l.min_regular_d, *r.min_regular_d);
      }
      return c;
    }
  }
  return {};
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == WeightFamily::power) os << "(c=" << c_ << ")";
  if (family_ == WeightFamily::custom_generators) {
    os << "(";
    for (std::size_t i = 0; i < w_.size(); ++i) os << (i ? "," : "") << w_[i];
    os << ")";
  }
  if (family_ == WeightFamily::tensor) {
    os << "(" << parts_->first.describe() << " x " << parts_->second.describe() << ")";
  }
  return os.str();
}

AdmissibilityReport is_admissible(const WeightSpec& w, const TruncationSpec& probe) {
  AdmissibilityReport rep;
  rep.probe = probe;
  const double a0 = w.eval(MultiIndex{});
  if (a0 != 1.0) rep.violations.push_back({0, a0});
  for (Generator n : w.generators_up_to(probe.max_generator)) {
    const double v = w.generator_weight(n);
    if (!(v > 1.0)) rep.violations.push_back({n, v});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

double regularity_sum(const WeightSpec& w, unsigned d, Generator K) {
  if (d == 0) throw DomainError("regularity index d must be positive");
  double sum = 0.0;
  for (Generator n : w.generators_up_to(K)) {
    const double a = w.generator_weight(n);
    if (!(a > 1.0)) {
      throw DomainError("weight is not admissible: a_{e_" + std::to_string(n) +
                        "} = " + std::to_string(a) + " <= 1");
    }
    // 1/(a^d - 1) written via expm1 so that a close to 1 keeps precision.
    sum += 1.0 / std::expm1(d * std::log(a));
  }
  return sum;
}

SuperexponentialReport check_superexponential(const WeightSpec& w, const TruncationSpec& probe) {
  SuperexponentialReport rep;
  rep.window = probe;
  std::vector<MultiIndex> idx;
  for (auto& a : enumerate(probe)) {
    bool ok = true;
    for (const auto& [g, e] : a.entries()) ok = ok && w.in_domain(g);
    if (ok) idx.push_back(std::move(a));
  }
  for (const auto& a : idx) {
    for (const auto& b : idx) {
      if (a.degree() + b.degree() > probe.max_degree) continue;
      const MultiIndex ab = a + b;
      ++rep.pairs_tested;
      // Compare in log space; the doubly exponential family leaves double
      // range long before the window does.
      const double lhs = w.log_eval(a) + w.log_eval(b);
      const double rhs = w.log_eval(ab);
      if (lhs > rhs + std::log1p(kWeightSlack)) {
        rep.ok = false;
        rep.witness = std::make_pair(a, b);
        try {
          rep.lhs = w.eval(a) * w.eval(b);
          rep.rhs = w.eval(ab);
        } catch (const OverflowError&) {
          rep.lhs = std::exp(lhs);
          rep.rhs = std::exp(rhs);
        }
        return rep;
      }
    }
  }
  return rep;
}

namespace {

// Hurwitz zeta sum_{n>=0} (a+n)^{-s} for integer s >= 2 and large a, by
// Euler-Maclaurin with no explicit terms.
double hurwitz_zeta_large_a(unsigned s, double a) {
  static constexpr double kB2jOverFact[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                            -1.0 / 1209600.0};
  double v = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -static_cast<double>(s));
  double rising = s;  // s (s+1) ... (s+2j-2)
  for (int j = 1; j <= 4; ++j) {
    v += kB2jOverFact[j - 1] * rising * std::pow(a, -static_cast<double>(s) - 2 * j + 1);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
  }
  return v;
}

constexpr Generator kKondratievExplicit = 2000;

// sum over domain generators n > from of -log(1 - a_{e_n}^{-d}).
double log_generator_sum(const WeightSpec& w, unsigned d, Generator from) {
  switch (w.family()) {
    case WeightFamily::tensor:
      return log_generator_sum(w.left(), d, (from + 1) / 2) +
             log_generator_sum(w.right(), d, from / 2);
    case WeightFamily::kondratiev: {
      double s = 0.0;
      const Generator stop = std::max(from, kKondratievExplicit);
      for (Generator n = stop; n > from; --n) {
        s += -std::log1p(-std::pow(2.0 * n, -static_cast<double>(d)));
      }
      // -log(1-x) = sum_k x^k / k with x = (2n)^{-d}; sum over n > stop.
      double tail = 0.0;
      for (unsigned k = 1; k < 64; ++k) {
        const double term = std::pow(2.0, -static_cast<double>(d * k)) / k *
                            hurwitz_zeta_large_a(d * k, stop + 1.0);
        tail += term;
        if (term < 1e-30 * tail) break;
      }
      return s + tail;
    }
    default: {
      double s = 0.0;
      const Generator hi = *w.max_generator();
      for (Generator n = hi; n > from; --n) {
        if (!w.in_domain(n)) continue;
        s += -std::log1p(-std::exp(-static_cast<double>(d) * w.log_eval(MultiIndex::unit(n))));
      }
      return s;
    }
  }
}

}  // namespace

double vage_constant_closed_form(const WeightSpec& w, unsigned d) {
  if (d == 0) throw DomainError("d must be positive");
  const auto cls = w.classification();
  if (!cls.admissible) throw DomainError("weight " + w.describe() + " is not admissible");
  if (!cls.exponential) {
    throw DomainError("closed-form A(d) needs an exponential weight; " + w.describe() +
                      " is not exponential (use the partial mode)");
  }
  if (!cls.min_regular_d || d < *cls.min_regular_d) {
    throw DivergenceError("sum of a_alpha^{-" + std::to_string(d) + "} diverges for " +
                          w.describe() + ": weight is not " + std::to_string(d) + "-regular");
  }
  return std::exp(0.5 * log_generator_sum(w, d, 0));
}

double vage_constant_partial(const WeightSpec& w, unsigned d, const TruncationSpec& window) {
  if (d == 0) throw DomainError("d must be positive");
  double sum = 0.0;
  for (const auto& a : enumerate(window)) {
    bool ok = true;
    for (const auto& [g, e] : a.entries()) ok = ok && w.in_domain(g);
    if (ok) sum += std::exp(-static_cast<double>(d) * w.log_eval(a));
  }
  return std::sqrt(sum);
}

}  // namespace vage
