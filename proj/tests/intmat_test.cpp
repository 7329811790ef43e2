#include <gtest/gtest.h>

#include <random>

#include "sailkit/intmat.hpp"

using namespace sailkit;

namespace {

IntMatrix companion(long c0, long c1, long c2) {
    // companion of x^3 + c2 x^2 + c1 x + c0
    return IntMatrix{{0, 0, -c0}, {1, 0, -c1}, {0, 1, -c2}};
}

IntMatrix random_matrix(std::mt19937_64& rng, int n, long lim) {
    std::uniform_int_distribution<long> d(-lim, lim);
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = d(rng);
    return m;
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n, long lim) {
    while (true) {
        IntMatrix u = random_matrix(rng, n, lim);
        if (abs(det(u)) == 1) return u;
    }
}

} // namespace

TEST(IntMat, DetExamples) {
    EXPECT_EQ(det(IntMatrix{{2, 1}, {1, 1}}), 1);
    EXPECT_EQ(det(IntMatrix{{1, 1}, {1, 0}}), -1);
    EXPECT_EQ(det(IntMatrix::identity(3)), 1);
    EXPECT_EQ(det(IntMatrix{{0, 2, 1}, {3, 0, 0}, {1, 1, 1}}), -3);
}

TEST(IntMat, CharpolyExamples) {
    EXPECT_EQ(charpoly(IntMatrix{{2, 1}, {1, 1}}), (IntPoly{1, -3, 1}));
    EXPECT_EQ(charpoly(IntMatrix{{0, 0, 1}, {1, 0, 3}, {0, 1, 0}}), (IntPoly{-1, -3, 0, 1}));
    EXPECT_EQ(charpoly(IntMatrix::identity(2)), (IntPoly{1, -2, 1}));
}

TEST(IntMat, IrreducibleExamples) {
    EXPECT_TRUE(is_irreducible_over_Q(IntPoly{1, -3, 1}));
    EXPECT_TRUE(is_irreducible_over_Q(IntPoly{-1, -3, 0, 1}));
    EXPECT_FALSE(is_irreducible_over_Q(IntPoly{1, -2, 1}));
    EXPECT_FALSE(is_irreducible_over_Q(IntPoly{-6, 11, -6, 1}));
    try {
        is_irreducible_over_Q(IntPoly{1, 0, 0, 0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDegree);
    }
}

TEST(IntMat, HyperbolicExamples) {
    EXPECT_TRUE(is_hyperbolic(IntMatrix{{2, 1}, {1, 1}}));
    EXPECT_FALSE(is_hyperbolic(IntMatrix{{0, 1}, {-1, 0}}));
    EXPECT_TRUE(is_hyperbolic(companion(-1, -3, 0)));
    EXPECT_TRUE(is_hyperbolic(companion(-1, 0, -1)));   // x^3 - x^2 - 1
    EXPECT_FALSE(is_hyperbolic(IntMatrix{{1, 1}, {0, 1}}));
    EXPECT_FALSE(is_hyperbolic(companion(-1, 1, -1)));  // (x - 1)(x^2 + 1)
    EXPECT_THROW(is_hyperbolic(IntMatrix{{2, 0}, {0, 1}}), Error);
}

TEST(IntMat, SimilarExamples) {
    EXPECT_TRUE(similar_over_Q(IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{1, 1}, {1, 2}}));
    EXPECT_FALSE(similar_over_Q(IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{1, 1}, {1, 0}}));
    EXPECT_FALSE(similar_over_Q(IntMatrix::identity(2), IntMatrix{{1, 1}, {0, 1}}));
    EXPECT_TRUE(similar_over_Q(IntMatrix{{1, 5}, {0, 1}}, IntMatrix{{1, 1}, {0, 1}}));
    EXPECT_THROW(similar_over_Q(IntMatrix::identity(2), IntMatrix::identity(3)), Error);
}

TEST(IntMat, EigenDataExamples) {
    auto e = eigen_data(IntMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(e.real_roots.size(), 2u);
    EXPECT_EQ(e.complex_pairs, 0);
    auto e3 = eigen_data(companion(-1, -3, 0));
    EXPECT_EQ(e3.real_roots.size(), 3u);
    EXPECT_EQ(e3.complex_pairs, 0);
    auto kv = eigen_data(companion(-1, 0, -1));
    EXPECT_EQ(kv.real_roots.size(), 1u);
    EXPECT_EQ(kv.complex_pairs, 1);
    ASSERT_EQ(kv.complex_moduli_sq.size(), 1u);
    EXPECT_THROW(eigen_data(IntMatrix::identity(2)), Error);
}

// A v(r) = r v(r) holds as a polynomial identity modulo the characteristic polynomial.
TEST(IntMat, EigenvectorsSatisfyIdentity) {
    for (const auto& m : {IntMatrix{{2, 1}, {1, 1}}, companion(-1, -3, 0), companion(-1, 0, -1),
                          IntMatrix{{3, 1, 4}, {1, 5, 9}, {2, 6, 5}}}) {
        auto e = eigen_data(m);
        RatPoly p = to_rat(e.charpoly);
        for (const auto& v : e.eigenvectors) {
            for (int i = 0; i < m.n(); ++i) {
                RatPoly lhs;
                for (int k = 0; k < m.n(); ++k) lhs = lhs + RatPoly::constant(BigRat(m(i, k))) * to_rat(v[k]);
                RatPoly rhs = RatPoly::x() * to_rat(v[i]);
                EXPECT_TRUE(poly_mod(lhs - rhs, p).is_zero());
            }
        }
    }
}

TEST(IntMat, SylvesterExamples) {
    IntMatrix a{{2, 1}, {1, 1}};
    auto basis = solve_sylvester_rational(a, a);
    EXPECT_EQ(basis.size(), 2u);
    // {I, A} spans the same space
    EXPECT_TRUE(solve_sylvester_rational(a, IntMatrix{{1, 1}, {1, 0}}).empty());
    EXPECT_EQ(solve_sylvester_rational(IntMatrix::identity(2), IntMatrix::identity(2)).size(), 4u);
    RatMatrix span(4, 4);
    auto flat = [](const RatMatrix& x, RatMatrix& into, int row) {
        for (int i = 0; i < 4; ++i) into(row, i) = x(i / 2, i % 2);
    };
    flat(basis[0], span, 0);
    flat(basis[1], span, 1);
    flat(to_rat(IntMatrix::identity(2)), span, 2);
    flat(to_rat(a), span, 3);
    EXPECT_EQ(rank(span), 2);
}

TEST(IntMat, Properties) {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 60; ++it) {
        int n = 2 + it % 3;
        IntMatrix m = random_matrix(rng, n, 6), k = random_matrix(rng, n, 6);
        EXPECT_EQ(det(m * k), det(m) * det(k));
        IntMatrix u = random_unimodular(rng, n, 3);
        IntMatrix conj = u * m * unimodular_inverse(u);
        EXPECT_EQ(charpoly(conj), charpoly(m));
        EXPECT_TRUE(similar_over_Q(m, conj));
        EXPECT_TRUE(similar_over_Q(conj, m));
        // Cayley-Hamilton
        IntPoly p = charpoly(m);
        IntMatrix acc(n, n);
        for (int i = p.degree(); i >= 0; --i) acc = acc * m + p.coeff(i) * IntMatrix::identity(n);
        EXPECT_TRUE(acc.is_zero());
        for (const auto& x : solve_sylvester_rational(m, conj))
            EXPECT_TRUE((to_rat(m) * x - x * to_rat(conj)).is_zero());
        for (const auto& x : integer_intertwiners(m, conj)) EXPECT_TRUE((m * x - x * conj).is_zero());
    }
}

TEST(IntMat, IntegerIntertwinersAreSaturated) {
    // A = B = [[2,1],[1,1]]: integer commutant is Z I + Z A, LLL reduced
    IntMatrix a{{2, 1}, {1, 1}};
    auto basis = integer_intertwiners(a, a);
    ASSERT_EQ(basis.size(), 2u);
    IntMatrix u{{1, 1}, {0, 1}};
    IntMatrix b = u * a * unimodular_inverse(u);
    auto lat = integer_intertwiners(b, a);
    ASSERT_EQ(lat.size(), 2u);
    // U^{-1}-type witness should be an integer combination: check the span has index 1 via det of a
    // witness found by small search
    bool found = false;
    for (long x = -3; x <= 3 && !found; ++x)
        for (long y = -3; y <= 3 && !found; ++y) {
            IntMatrix c = BigInt(x) * lat[0] + BigInt(y) * lat[1];
            if (verify_witness(b, a, c)) found = true;
        }
    EXPECT_TRUE(found);
}
