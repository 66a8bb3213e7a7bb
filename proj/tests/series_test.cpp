#include "vage/series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "vage/errors.hpp"

namespace vage {
namespace {

using testing::x;

MultiIndex e(Generator n, Exponent k = 1) { return MultiIndex::unit(n, k); }

const Complex I(0.0, 1.0);

TEST(Series, MonomialAndWindow) {
  const TruncationSpec t{2, 3};
  const auto one = monomial(MultiIndex{}, 1.0, t);
  EXPECT_EQ(one, Series::one(t));
  EXPECT_EQ(monomial(e(1), 2.0, t).coeff(e(1)), Complex(2.0));
  const auto m = monomial(e(1, 2) + e(2), I, t);
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m.coeff(e(1, 2) + e(2)), I);
  EXPECT_THROW(monomial(e(3), 1.0, t), DomainError);
  EXPECT_THROW(monomial(e(1, 4), 1.0, t), DomainError);
  EXPECT_TRUE(monomial(e(1), 0.0, t).is_zero());
}

TEST(Series, ConvolveExamples) {
  const TruncationSpec t{2, 4};
  const auto one = Series::one(t);
  const auto p = one + x(1, t);
  EXPECT_EQ(p * p, one + 2.0 * x(1, t) + monomial(e(1, 2), 1.0, t));
  EXPECT_EQ((x(1, t) + x(2, t)) * (x(1, t) - x(2, t)),
            monomial(e(1, 2), 1.0, t) - monomial(e(2, 2), 1.0, t));
  EXPECT_THROW(convolve(Series::one(t), Series::one({2, 3})), DomainError);
  EXPECT_THROW(linear_combine(1.0, Series::one(t), 1.0, Series::one({1, 4})), DomainError);
}

TEST(Series, ConvolveMatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (const TruncationSpec t : {TruncationSpec{3, 4}, TruncationSpec{2, 6}, TruncationSpec{8, 6}}) {
    // {8,6} has 3003 indices and exercises the untabulated path.
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = testing::random_series(t, rng, 3 + trial);
      const auto g = testing::random_series(t, rng, 3 + 2 * trial);
      EXPECT_LT(testing::max_diff(convolve(f, g), testing::brute_product(f, g)), 1e-14);
    }
  }
}

TEST(Series, LinearCombine) {
  std::mt19937_64 rng(2);
  const TruncationSpec t{2, 3};
  const auto f = testing::random_full_series(t, rng);
  const auto g = testing::random_full_series(t, rng);
  EXPECT_EQ(linear_combine(1.0, f, 0.0, g), f);
  EXPECT_TRUE(linear_combine(1.0, f, -1.0, f).is_zero());
  EXPECT_EQ(linear_combine(2.0, x(1, t), 3.0, x(1, t)), x(1, t, 5.0));
}

TEST(Series, RingLaws) {
  std::mt19937_64 rng(3);
  const TruncationSpec t{3, 5};
  const auto one = Series::one(t);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = testing::random_series(t, rng, 12);
    const auto g = testing::random_series(t, rng, 12);
    const auto h = testing::random_series(t, rng, 12);
    EXPECT_LT((f * g).max_abs_diff(g * f), 1e-12);
    EXPECT_LT(((f * g) * h).max_abs_diff(f * (g * h)), 1e-12);
    EXPECT_LT((f * (g + h)).max_abs_diff(f * g + f * h), 1e-12);
    EXPECT_LT((one * f).max_abs_diff(f), 1e-15);
  }
}

TEST(Series, TruncationCoherence) {
  std::mt19937_64 rng(4);
  const TruncationSpec lo{3, 4}, hi{3, 8};
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_full_series(lo, rng);
    const auto g = testing::random_full_series(lo, rng);
    const Series fh(hi, f.terms()), gh(hi, g.terms());
    const auto low = convolve(f, g);
    const auto full = convolve(fh, gh);
    for (const auto& a : enumerate(lo)) EXPECT_LT(std::abs(low.coeff(a) - full.coeff(a)), 1e-14);
  }
}

TEST(Series, NormP) {
  const TruncationSpec t{3, 3};
  const auto k = WeightSpec::kondratiev();
  EXPECT_DOUBLE_EQ(norm_p(x(2, t), k, 2), 0.25);
  EXPECT_NEAR(norm_p(Series::one(t) + x(1, t), k, 1), std::sqrt(1.5), 1e-15);
  std::mt19937_64 rng(5);
  const auto f = testing::random_full_series(t, rng);
  double l2 = 0.0;
  for (const auto& [a, c] : f.terms()) l2 += std::norm(c);
  EXPECT_NEAR(norm_p(f, k, 0), std::sqrt(l2), 1e-14);
  // Negative p: the test-function side of the pairing.
  EXPECT_DOUBLE_EQ(norm_p(x(2, t), k, -2), 4.0);
  EXPECT_THROW(norm_p(x(2, t), WeightSpec::schwartz(), 1), DomainError);
}

TEST(Series, NormDecaysForZeroExpectation) {
  std::mt19937_64 rng(6);
  const TruncationSpec t{3, 4};
  const auto w = WeightSpec::kondratiev();
  auto f = testing::random_full_series(t, rng);
  f = f - Series::constant(expectation(f), t);
  double prev = norm_p(f, w, 0);
  for (int q = 1; q <= 10; ++q) {
    const double n = norm_p(f, w, q);
    EXPECT_LT(n, prev);
    prev = n;
  }
  // Slowest decay comes from e_1 with a = 2: ||f||_q ~ 2^{-q/2}.
  EXPECT_LT(norm_p(f, w, 40), 1e-5);
}

TEST(Series, Expectation) {
  const TruncationSpec t{2, 3};
  EXPECT_EQ(expectation(Series::constant(3.0, t) + x(1, t)), Complex(3.0));
  EXPECT_EQ(expectation(x(1, t) * x(2, t)), Complex(0.0));
  const auto f = Series::one(t) + x(1, t), g = Series::constant(2.0, t) + x(2, t);
  EXPECT_EQ(expectation(f * g), Complex(2.0));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_full_series(t, rng), b = testing::random_full_series(t, rng);
    EXPECT_LT(std::abs(expectation(a * b) - expectation(a) * expectation(b)), 1e-15);
    EXPECT_LT(std::abs(expectation(linear_combine(2.0, a, I, b)) -
                       (2.0 * expectation(a) + I * expectation(b))),
              1e-15);
  }
  EXPECT_EQ(expectation(Series::one(t)), Complex(1.0));
}

TEST(Series, Power) {
  const TruncationSpec t{1, 4};
  EXPECT_EQ(power(x(1, t), 3), monomial(e(1, 3), 1.0, t));
  EXPECT_TRUE(power(x(1, t), 5).is_zero());
  std::mt19937_64 rng(8);
  const auto f = testing::random_full_series({2, 4}, rng);
  EXPECT_EQ(power(f, 0), Series::one({2, 4}));
  EXPECT_LT(power(f, 3).max_abs_diff(f * f * f), 1e-14);
  const TruncationSpec t2{1, 2};
  const auto p = Series::one(t2) + x(1, t2);
  EXPECT_EQ(power(p, 2), Series::one(t2) + 2.0 * x(1, t2) + monomial(e(1, 2), 1.0, t2));
}

TEST(Series, InvertExamples) {
  const TruncationSpec t{1, 3};
  const auto geo = invert(Series::one(t) - x(1, t));
  EXPECT_EQ(geo, Series::one(t) + x(1, t) + monomial(e(1, 2), 1.0, t) + monomial(e(1, 3), 1.0, t));
  EXPECT_EQ(invert(Series::constant(2.0, t)), Series::constant(0.5, t));

  const TruncationSpec t2{2, 2};
  const auto f = Series::one(t2) + x(1, t2) + x(2, t2);
  const auto expected = Series::one(t2) - x(1, t2) - x(2, t2) + monomial(e(1, 2), 1.0, t2) +
                        monomial(e(1) + e(2), 2.0, t2) + monomial(e(2, 2), 1.0, t2);
  EXPECT_EQ(invert(f), expected);
  EXPECT_EQ(f * expected, Series::one(t2));
}

TEST(Series, InvertResidualAndNeumannAgreement) {
  std::mt19937_64 rng(9);
  for (const TruncationSpec t : {TruncationSpec{3, 5}, TruncationSpec{7, 6}}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto f = testing::random_series(t, rng, 15);
      f = f - Series::constant(expectation(f), t) + Series::constant({1.2, -0.4}, t);
      const auto g = invert(f);
      EXPECT_LT((f * g).max_abs_diff(Series::one(t)), 1e-12);
      EXPECT_LT(neumann_invert(f, t.max_degree).max_abs_diff(g), 1e-12);
    }
  }
  const TruncationSpec t{1, 3};
  EXPECT_EQ(neumann_invert(Series::one(t) - x(1, t), 3), invert(Series::one(t) - x(1, t)));
  EXPECT_EQ(neumann_invert(Series::constant(4.0, t) + x(1, t), 0), Series::constant(0.25, t));
}

TEST(Series, SpectrumIsExpectation) {
  std::mt19937_64 rng(10);
  const TruncationSpec t{2, 4};
  const auto f = testing::random_full_series(t, rng);
  const Complex f0 = expectation(f);
  EXPECT_THROW(invert(f - Series::constant(f0, t)), NotInvertibleError);
  EXPECT_THROW(neumann_invert(f - Series::constant(f0, t), 3), NotInvertibleError);
  EXPECT_NO_THROW(invert(f - Series::constant(f0 + 1.0, t)));
}

TEST(Series, Derive) {
  const TruncationSpec t{2, 4};
  EXPECT_EQ(derive(1, monomial(e(1, 2), 1.0, t)), x(1, t, 2.0));
  EXPECT_TRUE(derive(2, x(1, t)).is_zero());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = testing::random_full_series(t, rng), g = testing::random_full_series(t, rng);
    for (Generator n = 1; n <= 3; ++n) {
      // Leibniz holds below the top degree; D_n of the truncated product
      // loses the degree-N terms that would need degree N+1 inputs.
      const auto lhs = derive(n, f * g);
      const auto rhs = derive(n, f) * g + f * derive(n, g);
      for (const auto& a : enumerate({2, 3})) EXPECT_LT(std::abs(lhs.coeff(a) - rhs.coeff(a)), 1e-12);
    }
  }
}

TEST(Series, Compose) {
  const TruncationSpec t{1, 3};
  const auto ex = compose(PowerSeries::exp(), x(1, t));
  EXPECT_EQ(ex, Series::one(t) + x(1, t) + monomial(e(1, 2), 0.5, t) + monomial(e(1, 3), 1.0 / 6, t));
  std::mt19937_64 rng(12);
  const auto f = testing::random_full_series({2, 3}, rng);
  EXPECT_EQ(compose(PowerSeries::polynomial({0.0, 1.0}), f), f);
  EXPECT_EQ(compose(PowerSeries::geometric(), x(1, t)), invert(Series::one(t) - x(1, t)));
  // Nonzero expectation: geometric(f) = 1/(1-f) as long as |f_0| < 1.
  const TruncationSpec t2{2, 3};
  const auto g = Series::constant(0.3, t2) + testing::random_series(t2, rng, 6) -
                 Series::constant(expectation(testing::random_series(t2, rng, 0)), t2);
  auto g0 = g - Series::constant(expectation(g) - 0.3, t2);
  EXPECT_LT(compose(PowerSeries::geometric(), g0).max_abs_diff(invert(Series::one(t2) - g0)), 1e-12);
  // exp(a + b) = exp(a) exp(b), with a nonzero constant part.
  const auto a = Series::constant({0.7, 0.2}, t2) + testing::random_series(t2, rng, 5);
  const auto b = testing::random_series(t2, rng, 5);
  EXPECT_LT((compose(PowerSeries::exp(), a) * compose(PowerSeries::exp(), b))
                .max_abs_diff(compose(PowerSeries::exp(), a + b)),
            1e-12);
  // sin^2 + cos^2 = 1.
  const auto s = compose(PowerSeries::sin(), a), c = compose(PowerSeries::cos(), a);
  EXPECT_LT((s * s + c * c).max_abs_diff(Series::one(t2)), 1e-12);
  // log1p(exp(h) - 1) = h for E[h] = 0.
  const auto h = b - Series::constant(expectation(b), t2);
  EXPECT_LT(compose(PowerSeries::log1p(), compose(PowerSeries::exp(), h) - Series::one(t2))
                .max_abs_diff(h),
            1e-12);
}

TEST(Series, ComposeGuards) {
  const TruncationSpec t{1, 3};
  const auto f = Series::constant(0.9, t) + x(1, t);
  ComposeGuard guard{WeightSpec::kondratiev(), 2};
  // R/A(2) = 1/sqrt(pi/2) ~ 0.798 < 0.9.
  EXPECT_THROW(compose(PowerSeries::geometric(), f, guard), DomainError);
  EXPECT_NO_THROW(compose(PowerSeries::geometric(), f));
  EXPECT_NO_THROW(compose(PowerSeries::geometric(), Series::constant(0.5, t) + x(1, t), guard));
  EXPECT_THROW(compose(PowerSeries::geometric(), Series::constant(1.0, t) + x(1, t)), ConvergenceError);
  // Entire functions ignore the guard.
  EXPECT_NO_THROW(compose(PowerSeries::exp(), Series::constant(50.0, t), guard));
}

}  // namespace
}  // namespace vage
