#include <gtest/gtest.h>

#include "sailkit/sail2d.hpp"
#include "test_support.hpp"

using namespace sailkit;
using testsupport::random_hyperbolic_2x2;
using testsupport::random_unimodular;

namespace {

LatticePoint2 pt(long x, long y) { return {BigInt(x), BigInt(y)}; }

std::vector<BigInt> ones(size_t n) { return std::vector<BigInt>(n, BigInt(1)); }

// Brute-force oracle: every lattice point of the cone within the box lies on
// the far side of (or on) the line through each consecutive vertex pair.
void expect_hull_edges(const SailChain2D& chain, long box) {
    std::vector<LatticePoint2> cone_points;
    for (long x = -box; x <= box; ++x)
        for (long y = -box; y <= box; ++y) {
            if (x == 0 && y == 0) continue;
            LatticePoint2 p = pt(x, y);
            if (chain.cone.contains(p)) cone_points.push_back(p);
        }
    for (size_t i = 0; i + 1 < chain.vertices.size(); ++i) {
        const auto& v = chain.vertices[i];
        const auto& u = chain.vertices[i + 1];
        ASSERT_TRUE(chain.cone.contains(v));
        LatticePoint2 d = u - v;
        int origin_side = sgn(cross(d, LatticePoint2{-v.x, -v.y}));
        ASSERT_NE(origin_side, 0);
        for (const auto& p : cone_points)
            ASSERT_NE(sgn(cross(d, p - v)), origin_side) << "point (" << p.x << "," << p.y << ") beyond edge " << i;
    }
}

} // namespace

TEST(Sail2D, IntegerLengthExamples) {
    EXPECT_EQ(integer_length(pt(0, 0), pt(2, 4)), 2);
    EXPECT_EQ(integer_length(pt(0, 0), pt(1, 0)), 1);
    EXPECT_EQ(integer_length(pt(1, 1), pt(4, 7)), 3);
    try {
        integer_length(pt(1, 1), pt(1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateSegment);
    }
}

TEST(Sail2D, IntegerSineExamples) {
    EXPECT_EQ(integer_sine(pt(1, 0), pt(0, 0), pt(0, 1)), 1);
    EXPECT_EQ(integer_sine(pt(2, 0), pt(0, 0), pt(0, 3)), 1);
    EXPECT_EQ(integer_sine(pt(1, 0), pt(0, 0), pt(1, 2)), 2);
    try {
        integer_sine(pt(1, 1), pt(0, 0), pt(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateAngle);
    }
}

TEST(Sail2D, GoldenChain) {
    SailChain2D c = sail_vertices(IntMatrix{{2, 1}, {1, 1}}, 4);
    std::vector<LatticePoint2> expect{pt(1, -1), pt(1, 0), pt(2, 1), pt(5, 3)};
    EXPECT_EQ(c.vertices, expect);
    EXPECT_EQ(c.lls, ones(5));
    expect_hull_edges(c, 100);
    // (1,1) lies outside the eigencone containing (1,0)
    EXPECT_FALSE(c.cone.contains(pt(1, 1)));
}

TEST(Sail2D, SameEigenlinesSameSail) {
    SailChain2D a = sail_vertices(IntMatrix{{2, 1}, {1, 1}}, 7);
    SailChain2D b = sail_vertices(IntMatrix{{1, 1}, {1, 0}}, 7);
    EXPECT_EQ(a.vertices, b.vertices);
}

TEST(Sail2D, MatchesBruteForceHull) {
    for (const IntMatrix& a : {IntMatrix{{3, 1}, {2, 1}}, IntMatrix{{5, 2}, {2, 1}}, IntMatrix{{1, 3}, {1, 2}},
                               IntMatrix{{7, 5}, {4, 3}}}) {
        SailChain2D c = sail_vertices(a, 5);
        expect_hull_edges(c, 100);
    }
}

TEST(Sail2D, LlsSequenceShape) {
    SailChain2D c = sail_vertices(IntMatrix{{3, 1}, {2, 1}}, 3);
    EXPECT_EQ(c.lls.size(), 3u);
    EXPECT_EQ(lls_sequence(c).size(), 3u);
    EXPECT_THROW(lls_sequence(std::vector<LatticePoint2>{pt(1, 0), pt(2, 1)}), Error);
    EXPECT_THROW(sail_vertices(IntMatrix{{3, 1}, {2, 1}}, 2), Error);
}

TEST(Sail2D, LlsPeriodExamples) {
    EXPECT_EQ(lls_period(IntMatrix{{2, 1}, {1, 1}}).word(), ones(1));
    EXPECT_EQ(lls_period(IntMatrix{{1, 1}, {1, 0}}).word(), ones(1));
    // omega for [[3,1],[2,1]] is (1 + sqrt 3)/2 with CF period (1, 2)
    PeriodWord p = lls_period(IntMatrix{{3, 1}, {2, 1}});
    EXPECT_EQ(p, period_of(cf_expand(QuadraticSurd::make(1, 1, 2, 3))));
    EXPECT_EQ(p.word(), (std::vector<BigInt>{1, 2}));
}

TEST(Sail2DProperty, InvariantUnderAffineUnimodular) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<long> c(-30, 30);
    int done = 0;
    while (done < 500) {
        LatticePoint2 p = pt(c(rng), c(rng)), q = pt(c(rng), c(rng)), r = pt(c(rng), c(rng));
        if (cross(p - q, r - q) == 0 || p == q || q == r) continue;
        IntMatrix u = random_unimodular(rng, 2, 6);
        LatticePoint2 t = pt(c(rng), c(rng));
        auto f = [&](const LatticePoint2& v) { return apply(u, v) + t; };
        EXPECT_EQ(integer_length(p, q), integer_length(f(p), f(q)));
        EXPECT_EQ(integer_sine(p, q, r), integer_sine(f(p), f(q), f(r)));
        ++done;
    }
}

TEST(Sail2DProperty, HullEdgeCertificate) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 15; ++i) {
        IntMatrix a = random_hyperbolic_2x2(rng, 6);
        SailChain2D c = sail_vertices(a, 5);
        // triangle O V_i V_i+1 holds no lattice points off the closed edge
        for (size_t k = 0; k + 1 < c.vertices.size(); ++k) {
            const auto& v = c.vertices[k];
            const auto& u = c.vertices[k + 1];
            long x0 = std::min({0L, v.x.get_si(), u.x.get_si()}), x1 = std::max({0L, v.x.get_si(), u.x.get_si()});
            long y0 = std::min({0L, v.y.get_si(), u.y.get_si()}), y1 = std::max({0L, v.y.get_si(), u.y.get_si()});
            BigInt area = cross(v, u);
            for (long x = x0; x <= x1; ++x)
                for (long y = y0; y <= y1; ++y) {
                    LatticePoint2 p = pt(x, y);
                    if (x == 0 && y == 0) continue;
                    BigInt a1 = cross(v, p), a2 = cross(p, u), a3 = cross(u - v, p - v);
                    bool inside = sgn(a1) * sgn(area) >= 0 && sgn(a2) * sgn(area) >= 0 && sgn(a3) * sgn(area) >= 0;
                    if (!inside) continue;
                    EXPECT_EQ(a3, 0) << "interior point in triangle for " << a.str();
                }
        }
    }
}

TEST(Sail2DProperty, GeneratorMapsWindowIntoSail) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        IntMatrix a = random_hyperbolic_2x2(rng, 8);
        LlsPeriod lp = lls_period_detail(a);
        size_t shift = lp.vertex_shift;
        SailChain2D c = sail_vertices(a, 3 * shift + 6);
        IntMatrix g = positive_sail_generator(a);
        IntMatrix gi = unimodular_inverse(g);
        for (size_t k = 0; k + shift < c.vertices.size(); ++k) {
            LatticePoint2 img = apply(g, c.vertices[k]), pre = apply(gi, c.vertices[k]);
            EXPECT_TRUE(img == c.vertices[k + shift] || pre == c.vertices[k + shift]) << a.str();
        }
    }
}

TEST(Sail2DProperty, LlsPeriodEqualsCfPeriod) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 60; ++i) {
        IntMatrix a = random_hyperbolic_2x2(rng, 15);
        EXPECT_EQ(lls_period(a), period_of(cf_expand(slope_of_expanding_eigenvector(a)))) << a.str();
    }
}

TEST(Sail2DProperty, LlsPeriodConjugationInvariant) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 40; ++i) {
        IntMatrix a = random_hyperbolic_2x2(rng, 8);
        IntMatrix u = random_unimodular(rng, 2, 4);
        EXPECT_EQ(lls_period(a), lls_period(u * a * unimodular_inverse(u)));
    }
}
