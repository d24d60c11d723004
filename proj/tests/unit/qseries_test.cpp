#include "defosc/qseries.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "defosc/recurrence.hpp"

using namespace defosc;

namespace {

double golden() { return golden_q<double>(); }

// independent recurrence oracle: p_{n+1} = ((A+C-x) p_n - C p_{n-1}) / A
double lqj_via_recurrence(int n, double x, double a, double b, double q) {
  return little_q_jacobi_by_recurrence(QParams<double>{q, a, b}, n, x);
}

}  // namespace

TEST(QPochhammer, EmptyProductIsOne) {
  EXPECT_EQ(q_pochhammer(0.7, 0.3, 0), 1.0);
  EXPECT_EQ(q_pochhammer(-5.0, -0.9, 0), 1.0);
}

TEST(QPochhammer, SingleFactor) {
  const double q = 0.37;
  EXPECT_DOUBLE_EQ(q_pochhammer(q, q, 1), 1.0 - q);
}

TEST(QPochhammer, NegativeBaseFourFactors) {
  // (0.5; -0.3)_4 = (1-0.5)(1+0.15)(1-0.045)(1+0.0135), unrolled
  const double unrolled = (1 - 0.5) * (1 + 0.15) * (1 - 0.045) * (1 + 0.0135);
  EXPECT_NEAR(q_pochhammer(0.5, -0.3, 4), unrolled, 1e-15);
  EXPECT_NEAR(q_pochhammer(0.5, -0.3, 4), 0.5565381875, 1e-15);
}

TEST(QPochhammer, SplitsAtAnyIndex) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> ua(-2.0, 2.0), uq(-0.95, 0.95);
  std::uniform_int_distribution<int> un(0, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = ua(rng), q = uq(rng);
    const int n = un(rng), m = un(rng);
    const double whole = q_pochhammer(a, q, n + m);
    const double split = q_pochhammer(a, q, n) * q_pochhammer(a * ipow(q, n), q, m);
    EXPECT_NEAR(whole, split, 1e-13 * std::max(1.0, std::abs(whole))) << "a=" << a << " q=" << q;
  }
}

TEST(QPochhammer, InfiniteProductConverges) {
  const double q = 0.5;
  const double inf = q_pochhammer_infinite(q, q);
  EXPECT_NEAR(inf, q_pochhammer(q, q, 200), 1e-15);
  EXPECT_THROW(q_pochhammer_infinite(0.5, 1.0), ParameterDomainError);
}

TEST(MultiPochhammer, EmptyAndSingleton) {
  const std::vector<double> none;
  EXPECT_EQ(multi_pochhammer<double>(none, 0.4, 5), 1.0);
  const std::vector<double> one{0.25};
  EXPECT_EQ(multi_pochhammer<double>(one, 0.4, 5), q_pochhammer(0.25, 0.4, 5));
}

TEST(MultiPochhammer, TwoParameters) {
  const double q = -0.6;
  const std::vector<double> as{q, q * q};
  // (q;q)_2 (q^2;q)_2 = (1-q)(1-q^2) (1-q^2)(1-q^3)
  const double expanded = (1 - q) * (1 - q * q) * (1 - q * q) * (1 - q * q * q);
  EXPECT_NEAR(multi_pochhammer<double>(as, q, 2), expanded, 1e-15);
}

TEST(LittleQJacobi, DegreeZeroAndOrigin) {
  const double q = golden();
  EXPECT_EQ(little_q_jacobi(0, 0.7, q, 1.0, q), 1.0);
  for (int n = 0; n < 10; ++n) EXPECT_EQ(little_q_jacobi(n, 0.0, 0.3, 0.2, 0.5), 1.0);
}

TEST(LittleQJacobi, GoldenDegreeTwoMatchesRecurrence) {
  const double q = golden();
  const double direct = little_q_jacobi(2, 0.3, q, 1.0, q);
  EXPECT_NEAR(direct, lqj_via_recurrence(2, 0.3, q, 1.0, q), 1e-13);
  // 40-digit evaluation of the terminating sum
  EXPECT_NEAR(direct, 1.298403532281084385922224, 1e-13);
}

TEST(LittleQJacobi, SatisfiesThreeTermRecurrence) {
  struct Case {
    double q, a, b;
  };
  const std::vector<Case> cases = {{golden(), golden(), 1.0}, {0.5, 0.3, 0.7}, {-0.45, 0.2, 0.5}, {0.8, 0.5, 0.5}};
  for (const auto& c : cases) {
    const QParams<double> p{c.q, c.a, c.b};
    for (int n = 0; n <= 10; ++n) {
      const auto mc = little_q_jacobi_monic_coeffs(p, n);
      for (double x : {-0.9, -0.2, 0.05, 0.3, 0.77, 1.3}) {
        const double pn = little_q_jacobi(n, x, c.a, c.b, c.q);
        const double pn1 = little_q_jacobi(n + 1, x, c.a, c.b, c.q);
        const double pm1 = n == 0 ? 0.0 : little_q_jacobi(n - 1, x, c.a, c.b, c.q);
        const double lhs = -x * pn;
        const double rhs = mc.A * pn1 - (mc.A + mc.C) * pn + mc.C * pm1;
        const double scale = std::max({1.0, std::abs(mc.A * pn1), std::abs((mc.A + mc.C) * pn), std::abs(mc.C * pm1)});
        EXPECT_NEAR(lhs, rhs, 1e-9 * scale) << "q=" << c.q << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(LittleQJacobi, DegenerateDenominatorThrows) {
  // a q = 1 makes (aq;q)_1 vanish
  EXPECT_THROW(little_q_jacobi(2, 0.3, 2.0, 1.0, 0.5), DegenerateParameterError);
}

TEST(BasicHypergeometric, ZeroArgumentIsOne) {
  HyperSeriesSpec<double> spec;
  spec.numerators = {{0.3}, {0.4}};
  spec.denominators = {{0.2}};
  spec.q = 0.5;
  spec.z = 0.0;
  const auto r = basic_hypergeometric(spec);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_FALSE(r.exhausted);
}

TEST(BasicHypergeometric, UnitNumeratorTerminatesAfterOneTerm) {
  HyperSeriesSpec<double> spec;
  spec.numerators = {{1.0}, {0.4}};  // q^{-0} = 1
  spec.denominators = {{0.2}};
  spec.q = 0.5;
  spec.z = 0.9;
  const auto r = basic_hypergeometric(spec);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.tail_estimate, 0.0);
}

TEST(BasicHypergeometric, QBinomialTheorem) {
  // 1phi0(a;-;q,z) = (az;q)_inf / (z;q)_inf
  HyperSeriesSpec<double> spec;
  spec.numerators = {{0.3}};
  spec.q = 0.6;
  spec.z = 0.4;
  const auto r = basic_hypergeometric(spec);
  const double expected = q_pochhammer_infinite(0.12, 0.6) / q_pochhammer_infinite(0.4, 0.6);
  EXPECT_NEAR(r.value, expected, 1e-13);
}

TEST(BasicHypergeometric, TerminatingTwoPhiOneMatchesLittleQJacobi) {
  const double q = 0.5, a = 0.3, b = 0.7, x = 0.4;
  const int n = 4;
  HyperSeriesSpec<double> spec;
  spec.numerators = {{ipow(q, -n)}, {a * b * ipow(q, n + 1)}};
  spec.denominators = {{a * q}};
  spec.q = q;
  spec.z = q * x;
  const auto r = basic_hypergeometric(spec);
  EXPECT_NEAR(r.value, little_q_jacobi(n, x, a, b, q), 1e-12);
}

TEST(BasicHypergeometric, StableUnderLargerTruncation) {
  HyperSeriesSpec<double> spec;
  spec.numerators = {{0.3}, {-0.2}};
  spec.denominators = {{0.1}};
  spec.q = -0.7;
  spec.z = 0.5;
  const auto r1 = basic_hypergeometric(spec);
  spec.max_terms *= 2;
  const auto r2 = basic_hypergeometric(spec);
  EXPECT_LT(std::abs(r1.value - r2.value), spec.tail_tolerance);
  spec.tail_tolerance = 1e-16;
  const auto r3 = basic_hypergeometric(spec);
  EXPECT_LT(std::abs(r1.value - r3.value), 1e-14);
}

TEST(BasicHypergeometric, DivergenceDetected) {
  // 2phi0 with large z: (-1)^k q^{C(k,2)} power is negative, terms grow like q^{-k^2}
  HyperSeriesSpec<double> spec;
  spec.numerators = {{0.3}, {0.4}, {0.5}};
  spec.denominators = {};
  spec.q = 0.5;
  spec.z = 1.0;
  EXPECT_THROW(basic_hypergeometric(spec), DivergenceError);
}

TEST(BasicHypergeometric, ExhaustionIsFlagged) {
  HyperSeriesSpec<double> spec;
  spec.numerators = {{0.0}};
  spec.q = 0.5;
  spec.z = 0.999999;  // geometric series, slow
  spec.max_terms = 50;
  const auto r = basic_hypergeometric(spec);
  EXPECT_TRUE(r.exhausted);
}

TEST(BasicHypergeometric, GoldenNormalizationTermsMatchDirectSeries) {
  // term n of the direct series: r2^n / prod_{k<n} 2 b_k^2
  const auto seq = fibonacci_golden<double>();
  const double r2 = 0.2;
  const auto spec = golden_normalization_spec(golden(), r2);
  const auto terms = basic_hypergeometric_terms(spec, 10);
  double direct = 1.0;
  for (int n = 0; n < 10; ++n) {
    EXPECT_NEAR(terms[n], direct, 1e-11 * direct) << "n=" << n;
    direct *= r2 / (2.0 * seq.b(n) * seq.b(n));
  }
}

TEST(BasicHypergeometric, GoldenNormalizationDiverges) {
  // b_n -> 0 geometrically, so the ratio r2 / (2 b_n^2) is unbounded
  for (double r2 : {0.01, 0.1, 0.25}) {
    EXPECT_THROW(basic_hypergeometric(golden_normalization_spec(golden(), r2)), DivergenceError) << r2;
  }
}

TEST(BasicHypergeometric, AsPrintedConventionIsComputable) {
  HyperSeriesSpec<double> spec = golden_normalization_spec(golden(), 0.2);
  spec.convention = SeriesConvention::AsPrinted;
  const auto terms = basic_hypergeometric_terms(spec, 3);
  EXPECT_EQ(terms[0], 1.0);
  // k = 1: prod (1 - a_i) / (1 - b_1), no z and no (q;q)_1; the q-power is q^0
  const double q = golden();
  const double t1 = (1 + q) * (1 + q * q) * (1 - q * q * q) * (1 - q * q * q) / (1 - q * q);
  EXPECT_NEAR(terms[1], t1, 1e-14);
}
