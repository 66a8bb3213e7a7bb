#include "vage/linsys.hpp"

#include <algorithm>
#include <random>

#include "vage/errors.hpp"

namespace vage {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

RingMatrix block(const RingMatrix& a, const RingMatrix& b, const RingMatrix& c, const RingMatrix& d) {
  // [[a, b], [c, d]]
  require(a.rows() == b.rows() && c.rows() == d.rows() && a.cols() == c.cols() &&
              b.cols() == d.cols(),
          "block matrix: incompatible shapes");
  RingMatrix out(a.rows() + c.rows(), a.cols() + b.cols(), a.window());
  auto put = [&](const RingMatrix& m, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(r0 + i, c0 + j) = m(i, j);
  };
  put(a, 0, 0);
  put(b, 0, a.cols());
  put(c, a.rows(), 0);
  put(d, a.rows(), a.cols());
  return out;
}

RingMatrix zeros(std::size_t r, std::size_t c, const TruncationSpec& t) { return RingMatrix(r, c, t); }

RingMatrix hstack(const RingMatrix& a, const RingMatrix& b) {
  require(a.rows() == b.rows(), "hstack: row counts differ");
  RingMatrix out(a.rows(), a.cols() + b.cols(), a.window());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

RingMatrix vstack(const RingMatrix& a, const RingMatrix& b) {
  require(a.cols() == b.cols(), "vstack: column counts differ");
  RingMatrix out(a.rows() + b.rows(), a.cols(), a.window());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

}  // namespace

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols, TruncationSpec window)
    : rows_(rows), cols_(cols), window_(window), e_(rows * cols, Series(window)) {
  require(rows > 0 && cols > 0, "RingMatrix: dimensions must be positive");
}

RingMatrix::RingMatrix(std::size_t rows, std::size_t cols, std::vector<Series> entries)
    : rows_(rows), cols_(cols), window_(entries.empty() ? TruncationSpec{} : entries[0].window()),
      e_(std::move(entries)) {
  require(rows > 0 && cols > 0, "RingMatrix: dimensions must be positive");
  require(e_.size() == rows * cols, "RingMatrix: entry count does not match shape");
  for (const auto& s : e_) require(s.window() == window_, "RingMatrix: entries must share a window");
}

RingMatrix RingMatrix::identity(std::size_t n, TruncationSpec window) {
  RingMatrix m(n, n, window);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Series::one(window);
  return m;
}

RingMatrix RingMatrix::constant(const ComplexMatrix& c, TruncationSpec window) {
  RingMatrix m(c.rows(), c.cols(), window);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Series::constant(c(i, j), window);
  return m;
}

RingMatrix RingMatrix::scalar(const Series& s) { return RingMatrix(1, 1, std::vector<Series>{s}); }

ComplexMatrix RingMatrix::expectation() const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = vage::expectation((*this)(i, j));
  return out;
}

double RingMatrix::max_abs_diff(const RingMatrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, "max_abs_diff: shapes differ");
  double m = 0.0;
  for (std::size_t k = 0; k < e_.size(); ++k) m = std::max(m, e_[k].max_abs_diff(other.e_[k]));
  return m;
}

RingMatrix mat_mul(const RingMatrix& x, const RingMatrix& y) {
  require(x.cols() == y.rows(), "mat_mul: inner dimensions differ");
  require(x.window() == y.window(), "mat_mul: windows differ");
  RingMatrix out(x.rows(), y.cols(), x.window());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      Series acc(x.window());
      for (std::size_t k = 0; k < x.cols(); ++k) {
        if (x(i, k).is_zero() || y(k, j).is_zero()) continue;
        acc = acc + x(i, k) * y(k, j);
      }
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

RingMatrix mat_add(const RingMatrix& x, const RingMatrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), "mat_add: shapes differ");
  RingMatrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) + y(i, j);
  return out;
}

RingMatrix mat_sub(const RingMatrix& x, const RingMatrix& y) { return mat_add(x, mat_scale(-1.0, y)); }

RingMatrix mat_scale(const Series& s, const RingMatrix& x) {
  RingMatrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = s * x(i, j);
  return out;
}

RingMatrix mat_scale(Complex c, const RingMatrix& x) {
  RingMatrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = c * x(i, j);
  return out;
}

RingMatrix mat_derive(Generator n, const RingMatrix& x) {
  RingMatrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = derive(n, x(i, j));
  return out;
}

MatInverse mat_invert_report(const RingMatrix& m) {
  require(m.rows() == m.cols(), "mat_invert: matrix must be square");
  const ComplexMatrix e = m.expectation();
  Eigen::JacobiSVD<ComplexMatrix> svd(e);
  const auto& sv = svd.singularValues();
  const double smax = sv(0), smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin < kSingularTol * smax) {
    throw NotInvertibleError("mat_invert: E[M] is singular (sigma_min/sigma_max = " +
                             std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
  }
  const ComplexMatrix einv = e.inverse();
  const auto& t = m.window();
  const RingMatrix id = RingMatrix::identity(m.rows(), t);
  const RingMatrix k = mat_sub(id, mat_mul(RingMatrix::constant(einv, t), m));
  RingMatrix s = id;
  for (unsigned n = 0; n < t.max_degree; ++n) s = mat_add(id, mat_mul(k, s));
  return {mat_mul(s, RingMatrix::constant(einv, t)), smax / smin};
}

RingMatrix mat_invert(const RingMatrix& m) { return mat_invert_report(m).inverse; }

void Realization::validate() const {
  const std::size_t n = A.rows();
  require(A.cols() == n, "realization: A must be square");
  require(B.rows() == n, "realization: B must have as many rows as A");
  require(C.cols() == n, "realization: C must have as many columns as A");
  require(D.rows() == C.rows(), "realization: D and C row counts differ");
  require(D.cols() == B.cols(), "realization: D and B column counts differ");
  const auto& t = D.window();
  require(A.window() == t && B.window() == t && C.window() == t,
          "realization: matrices must share a window");
}

Realization realization_sum(const Realization& r1, const Realization& r2) {
  r1.validate();
  r2.validate();
  require(r1.outputs() == r2.outputs() && r1.inputs() == r2.inputs(),
          "realization_sum: output/input dimensions differ");
  require(r1.window() == r2.window(), "realization_sum: windows differ");
  const auto& t = r1.window();
  const std::size_t n1 = r1.state_dim(), n2 = r2.state_dim();
  return {block(r1.A, zeros(n1, n2, t), zeros(n2, n1, t), r2.A), vstack(r1.B, r2.B),
          hstack(r1.C, r2.C), mat_add(r1.D, r2.D)};
}

Realization realization_product(const Realization& r1, const Realization& r2) {
  r1.validate();
  r2.validate();
  require(r1.inputs() == r2.outputs(), "realization_product: inner dimensions differ");
  require(r1.window() == r2.window(), "realization_product: windows differ");
  const auto& t = r1.window();
  const std::size_t n2 = r2.state_dim();
  return {block(r1.A, mat_mul(r1.B, r2.C), zeros(n2, r1.state_dim(), t), r2.A),
          vstack(mat_mul(r1.B, r2.D), r2.B), hstack(r1.C, mat_mul(r1.D, r2.C)),
          mat_mul(r1.D, r2.D)};
}

Realization realization_concat_col(const Realization& r1, const Realization& r2) {
  r1.validate();
  r2.validate();
  require(r1.inputs() == r2.inputs(), "realization_concat_col: input dimensions differ");
  require(r1.window() == r2.window(), "realization_concat_col: windows differ");
  const auto& t = r1.window();
  const std::size_t n1 = r1.state_dim(), n2 = r2.state_dim();
  return {block(r1.A, zeros(n1, n2, t), zeros(n2, n1, t), r2.A), vstack(r1.B, r2.B),
          block(r1.C, zeros(r1.outputs(), n2, t), zeros(r2.outputs(), n1, t), r2.C),
          vstack(r1.D, r2.D)};
}

Realization realization_concat_row(const Realization& r1, const Realization& r2) {
  r1.validate();
  r2.validate();
  require(r1.outputs() == r2.outputs(), "realization_concat_row: output dimensions differ");
  require(r1.window() == r2.window(), "realization_concat_row: windows differ");
  const auto& t = r1.window();
  const std::size_t n1 = r1.state_dim(), n2 = r2.state_dim();
  return {block(r1.A, zeros(n1, n2, t), zeros(n2, n1, t), r2.A),
          block(r1.B, zeros(n1, r2.inputs(), t), zeros(n2, r1.inputs(), t), r2.B),
          hstack(r1.C, r2.C), hstack(r1.D, r2.D)};
}

Realization realization_inverse(const Realization& r) {
  r.validate();
  require(r.outputs() == r.inputs(), "realization_inverse: D must be square");
  const RingMatrix dinv = mat_invert(r.D);
  const RingMatrix bd = mat_mul(r.B, dinv);
  return {mat_sub(r.A, mat_mul(bd, r.C)), bd, mat_scale(-1.0, mat_mul(dinv, r.C)), dinv};
}

RingMatrix eval_realization(const Realization& r, const Series& f) {
  r.validate();
  require(f.window() == r.window(), "eval_realization: f and realization windows differ");
  const RingMatrix m = mat_sub(RingMatrix::identity(r.state_dim(), f.window()), mat_scale(f, r.A));
  RingMatrix minv = RingMatrix::identity(1, f.window());
  try {
    minv = mat_invert(m);
  } catch (const NotInvertibleError&) {
    throw DomainError("eval_realization: I - E[f]E[A] is not invertible at this f");
  }
  return mat_add(r.D, mat_scale(f, mat_mul(r.C, mat_mul(minv, r.B))));
}

RingMatrix eval_rational_pq(const std::vector<RingMatrix>& p, const std::vector<Series>& q,
                            const Series& f) {
  require(!p.empty() && !q.empty(), "eval_rational_pq: empty polynomial");
  RingMatrix pf = p.back();
  for (std::size_t m = p.size() - 1; m-- > 0;) pf = mat_add(mat_scale(f, pf), p[m]);
  Series qf = q.back();
  for (std::size_t m = q.size() - 1; m-- > 0;) qf = f * qf + q[m];
  if (std::abs(expectation(qf)) <= kZeroThreshold) {
    throw NotInvertibleError("eval_rational_pq: sum_m E[q_m] E[f]^m vanishes");
  }
  return mat_scale(invert(qf), pf);
}

std::size_t kalman_rank(const ComplexMatrix& ce, const ComplexMatrix& ae) {
  const Eigen::Index n = ae.rows();
  if (ae.cols() != n || ce.cols() != n) throw DomainError("kalman_rank: shape mismatch");
  const Eigen::Index p = ce.rows();
  ComplexMatrix stack(p * n, n);
  ComplexMatrix blk = ce;
  for (Eigen::Index k = 0; k < n; ++k) {
    stack.middleRows(k * p, p) = blk;
    blk = blk * ae;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(stack);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * sv(0)) ++r;
  return r;
}

bool kalman_observable(const ComplexMatrix& ce, const ComplexMatrix& ae) {
  return kalman_rank(ce, ae) == static_cast<std::size_t>(ae.rows());
}

const char* to_string(WitnessStatus s) noexcept {
  switch (s) {
    case WitnessStatus::found: return "found";
    case WitnessStatus::not_found: return "not_found";
    case WitnessStatus::inconclusive: return "inconclusive";
    case WitnessStatus::zero_input: return "zero_input";
  }
  return "?";
}

ObservabilityWitness observability_witness(const Realization& r, const RingMatrix& f) {
  r.validate();
  require(f.rows() == r.state_dim() && f.cols() == 1, "observability_witness: f must be N x 1");
  require(f.window() == r.window(), "observability_witness: windows differ");
  ObservabilityWitness w;
  w.horizon = r.state_dim() * window_size(r.window());
  if (!kalman_observable(r.C.expectation(), r.A.expectation())) return w;
  double scale = 0.0;
  for (const auto& s : f.entries())
    for (const auto& [a, c] : s.terms()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) {
    w.status = WitnessStatus::zero_input;
    return w;
  }
  const double tol = 1e-12 * scale;
  RingMatrix x = f;
  for (std::size_t k = 0; k < w.horizon; ++k) {
    const RingMatrix y = mat_mul(r.C, x);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      for (const auto& [a, c] : y(i, 0).terms()) {
        if (std::abs(c) > tol) {
          w.status = WitnessStatus::found;
          w.k = k;
          w.row = i;
          w.alpha = a;
          w.value = c;
          return w;
        }
      }
    }
    x = mat_mul(r.A, x);
  }
  w.status = WitnessStatus::not_found;
  return w;
}

ObservabilityTrials observability_witness(const Realization& r, std::size_t trials,
                                          std::uint64_t seed) {
  r.validate();
  ObservabilityTrials out;
  out.seed = seed;
  if (!kalman_observable(r.C.expectation(), r.A.expectation())) return out;
  const auto idx = enumerate(r.window());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(0.3);
  std::uniform_int_distribution<std::size_t> pick_state(0, r.state_dim() - 1), pick_idx(0, idx.size() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    RingMatrix f(r.state_dim(), 1, r.window());
    for (std::size_t i = 0; i < r.state_dim(); ++i) {
      Series::Terms terms;
      for (const auto& a : idx)
        if (keep(rng)) terms.emplace(a, Complex(u(rng), u(rng)));
      f(i, 0) = Series(r.window(), std::move(terms));
    }
    // Guarantee a nonzero input.
    const std::size_t i0 = pick_state(rng);
    f(i0, 0) = f(i0, 0) + monomial(idx[pick_idx(rng)], 1.0, r.window());
    if (f(i0, 0).is_zero()) f(i0, 0) = Series::one(r.window());
    auto w = observability_witness(r, f);
    ++out.trials;
    if (w.status == WitnessStatus::found) {
      ++out.found;
      out.max_k = std::max(out.max_k, w.k);
    }
    out.witnesses.push_back(std::move(w));
  }
  out.status = out.found == out.trials ? WitnessStatus::found : WitnessStatus::not_found;
  return out;
}

}  // namespace vage
