#include <gtest/gtest.h>

#include "sailkit/cf.hpp"
#include "test_support.hpp"

using namespace sailkit;
using testsupport::random_hyperbolic_2x2;
using testsupport::random_unimodular;

namespace {

std::vector<BigInt> w(std::initializer_list<long> xs) {
    std::vector<BigInt> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

QuadraticSurd phi() { return QuadraticSurd::make(1, 1, 2, 5); }

} // namespace

TEST(CF, GoldenRatioIsPurelyPeriodic) {
    CFExpansion e = cf_expand(phi());
    EXPECT_TRUE(e.preperiod.empty());
    EXPECT_EQ(e.period, w({1}));
    EXPECT_EQ(e.q(), 1u);
    EXPECT_EQ(e.digit(0), 1);
}

TEST(CF, SqrtTwoAndThree) {
    CFExpansion e2 = cf_expand(QuadraticSurd::make(0, 1, 1, 2));
    EXPECT_EQ(e2.preperiod, w({1}));
    EXPECT_EQ(e2.period, w({2}));
    CFExpansion e3 = cf_expand(QuadraticSurd::make(0, 1, 1, 3));
    EXPECT_EQ(e3.preperiod, w({1}));
    EXPECT_EQ(e3.period, w({1, 2}));
}

TEST(CF, NegativeSlope) {
    // -sqrt(2) = [-2; 1, 1, 2, 2, ...]: the tail settles into (2)
    CFExpansion e = cf_expand(QuadraticSurd::make(0, -1, 1, 2));
    EXPECT_EQ(e.digit(0), -2);
    EXPECT_EQ(period_of(e).word(), w({2}));
    EXPECT_EQ(cf_value(e), QuadraticSurd::make(0, -1, 1, 2));
}

TEST(CF, RationalInputRejected) {
    try {
        cf_expand(QuadraticSurd(BigRat(3, 7)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RationalInput);
    }
}

TEST(CF, PeriodWordCanonicalRotation) {
    CFExpansion a{{}, w({1, 2})}, b{{}, w({2, 1})};
    EXPECT_EQ(period_of(a).word(), w({1, 2}));
    EXPECT_EQ(period_of(b).word(), w({1, 2}));
    EXPECT_TRUE(period_cyclic_equal(period_of(a), period_of(b)));
    EXPECT_FALSE(period_cyclic_equal(PeriodWord(w({1, 2})), PeriodWord(w({1, 1, 2}))));
    EXPECT_EQ(primitive_root(w({3, 1, 3, 1, 3, 1})), w({3, 1}));
}

TEST(CF, Slopes) {
    EXPECT_EQ(slope_of_expanding_eigenvector(IntMatrix{{2, 1}, {1, 1}}), phi());
    EXPECT_EQ(slope_of_expanding_eigenvector(IntMatrix{{1, 1}, {1, 0}}), phi());
    EXPECT_EQ(slope_of_expanding_eigenvector(IntMatrix{{3, 1}, {2, 1}}), QuadraticSurd::make(1, 1, 2, 3));
    // contracting-eigenvalue matrices still use the expanding direction
    QuadraticSurd w2 = slope_of_expanding_eigenvector(IntMatrix{{-2, -1}, {-1, -1}});
    EXPECT_EQ(w2, phi());
}

TEST(CF, SlopeDomainErrors) {
    EXPECT_THROW(slope_of_expanding_eigenvector(IntMatrix{{1, 1}, {0, 1}}), Error);
    EXPECT_THROW(slope_of_expanding_eigenvector(IntMatrix{{2, 0}, {0, 1}}), Error);
    EXPECT_THROW(slope_of_expanding_eigenvector(IntMatrix{{0, 1}, {-1, 0}}), Error);
}

TEST(CF, Convergents) {
    CFExpansion e = cf_expand(QuadraticSurd::make(0, 1, 1, 2));
    auto m = convergent_matrices(e, 4);
    ASSERT_EQ(m.size(), 4u);
    // first column holds the convergent p_i / q_i of sqrt 2: 1, 3/2, 7/5, 17/12
    EXPECT_EQ(m[0], (IntMatrix{{1, 1}, {1, 0}}));
    EXPECT_EQ(m[1], (IntMatrix{{3, 1}, {2, 1}}));
    EXPECT_EQ(m[2], (IntMatrix{{7, 3}, {5, 2}}));
    EXPECT_EQ(m[3], (IntMatrix{{17, 7}, {12, 5}}));
    for (size_t i = 0; i < m.size(); ++i) EXPECT_EQ(det(m[i]), (i % 2 == 0) ? -1 : 1);
}

TEST(CFProperty, ReconstructionIsExact) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> dd(2, 500), pp(-50, 50), qq(1, 9), rr(1, 40), sg(0, 1);
    int checked = 0;
    while (checked < 150) {
        long d = dd(rng);
        if (is_perfect_square(BigInt(d))) continue;
        long q = qq(rng) * (sg(rng) ? 1 : -1);
        QuadraticSurd x = QuadraticSurd::make(pp(rng), q, rr(rng) * (sg(rng) ? 1 : -1), d);
        if (x.is_rational()) continue;
        CFExpansion e = cf_expand(x);
        EXPECT_EQ(cf_value(e, x.radicand()), x) << x;
        for (const auto& a : e.period) EXPECT_GE(a, 1);
        for (size_t i = 1; i < e.preperiod.size(); ++i) EXPECT_GE(e.preperiod[i], 1);
        ++checked;
    }
}

TEST(CFProperty, PreperiodAndPeriodMinimal) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> dd(2, 300), pp(-20, 20), rr(1, 15);
    for (int i = 0; i < 100; ++i) {
        long d = dd(rng);
        if (is_perfect_square(BigInt(d))) continue;
        CFExpansion e = cf_expand(QuadraticSurd::make(pp(rng), 1, rr(rng), d));
        // doubling and re-minimising returns the same word
        std::vector<BigInt> doubled = e.period;
        doubled.insert(doubled.end(), e.period.begin(), e.period.end());
        EXPECT_EQ(primitive_root(doubled), e.period);
        EXPECT_EQ(primitive_root(e.period), e.period);
        // shorter preperiod would be inconsistent with the digit sequence
        if (!e.preperiod.empty()) {
            EXPECT_NE(e.preperiod.back(), e.period.back());
        }
    }
}

TEST(CFProperty, ConjugationInvariance) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        IntMatrix a = random_hyperbolic_2x2(rng, 10);
        IntMatrix u = random_unimodular(rng, 2, 5);
        IntMatrix b = u * a * unimodular_inverse(u);
        PeriodWord pa = period_of(cf_expand(slope_of_expanding_eigenvector(a)));
        PeriodWord pb = period_of(cf_expand(slope_of_expanding_eigenvector(b)));
        EXPECT_EQ(pa, pb) << a.str() << " vs " << b.str();
    }
}
