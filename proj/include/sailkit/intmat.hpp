#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sailkit/linalg.hpp"
#include "sailkit/roots.hpp"

namespace sailkit {

/// Determinant by fraction-free (Bareiss) elimination.
inline BigInt det(const IntMatrix& m) {
    if (!m.square()) fail(ErrorKind::Domain, "determinant of a non-square matrix");
    const int n = m.n();
    if (n == 0) return 1;
    IntMatrix a = m;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Faddeev-LeVerrier data: charpoly coefficients and the matrices M_1..M_n with
/// adj(xI - A) = sum_k M_k x^{n-k}. All divisions are exact over the integers.
struct FaddeevLeVerrier {
    IntPoly charpoly;
    std::vector<IntMatrix> adj_terms; // adj_terms[k-1] = M_k

    explicit FaddeevLeVerrier(const IntMatrix& a) {
        const int n = a.n();
        std::vector<BigInt> c(n + 1);
        c[n] = 1;
        IntMatrix mk(n, n);
        for (int k = 1; k <= n; ++k) {
            mk = a * mk + c[n - k + 1] * IntMatrix::identity(n);
            adj_terms.push_back(mk);
            BigInt tr = (a * mk).trace();
            c[n - k] = -tr / k;
        }
        charpoly = IntPoly(std::move(c));
    }

    /// Entry (i, j) of adj(xI - A) as a polynomial in x.
    IntPoly adj_entry(int i, int j) const {
        const int n = static_cast<int>(adj_terms.size());
        std::vector<BigInt> c(n);
        for (int k = 1; k <= n; ++k) c[n - k] = adj_terms[k - 1](i, j);
        return IntPoly(std::move(c));
    }
};

inline IntPoly charpoly(const IntMatrix& m) {
    if (!m.square()) fail(ErrorKind::Domain, "characteristic polynomial of a non-square matrix");
    return FaddeevLeVerrier(m).charpoly;
}

inline bool is_irreducible_over_Q(const IntPoly& p) {
    if (p.degree() == 2) return !is_perfect_square(discriminant_quadratic(p));
    if (p.degree() == 3) return rational_roots(p).empty();
    fail(ErrorKind::UnsupportedDegree, "irreducibility test supports degree 2 and 3 only, got " +
                                           std::to_string(p.degree()));
}

/// Adjugate of a unimodular integer matrix equals det * inverse.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    BigInt d = det(m);
    if (abs(d) != 1) fail(ErrorKind::Domain, "matrix is not unimodular");
    FaddeevLeVerrier f(m);
    // adj(M) = (-1)^{n-1} * adj(xI - M) at x = 0
    IntMatrix adj = f.adj_terms.back();
    if (m.n() % 2 == 0) adj = -adj;
    return d * adj;
}

/// Polynomial whose unique real root is |c|^2 for the complex pair c of an
/// integer matrix of size 2 or 3 with one complex-conjugate pair.
inline IntPoly complex_modulus_poly(const IntPoly& p, const BigInt& d) {
    if (p.degree() == 2) return IntPoly(std::vector<BigInt>{-d, 1});
    if (p.degree() == 3) {
        // |c|^2 = d / r for the real root r; y^3 p(d / y) has root y = d / r
        std::vector<BigInt> c(4);
        for (int i = 0; i <= 3; ++i) {
            BigInt dp;
            mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(i));
            c[3 - i] = p.coeff(i) * dp;
        }
        return IntPoly(std::move(c));
    }
    fail(ErrorKind::UnsupportedDegree, "complex modulus polynomial supports n = 2, 3");
}

inline bool is_hyperbolic(const IntMatrix& m) {
    BigInt d = det(m);
    if (abs(d) != 1) fail(ErrorKind::Domain, "hyperbolicity is defined for unimodular matrices only");
    const int n = m.n();
    if (n > 3) fail(ErrorKind::UnsupportedDegree, "hyperbolicity test supports n <= 3");
    IntPoly p = charpoly(m);
    // a real eigenvalue of modulus one is +1 or -1
    if (p.eval(BigInt(1)) == 0 || p.eval(BigInt(-1)) == 0) return false;
    if (n == 1) return false;
    int real = SturmChain(p).count_all();
    if (real == n) return true;
    IntPoly mp = complex_modulus_poly(p, d);
    auto boxes = sturm_isolate(mp);
    for (auto& b : boxes) {
        if (sgn(b.lo) <= 0 && sgn(b.hi) <= 0) continue; // moduli are positive
        if (alg_sign(IntPoly{-1, 1}, b) == 0) return false;
    }
    return true;
}

namespace detail {

using PolyMatrix = std::vector<std::vector<RatPoly>>;

/// Invariant factors of a square polynomial matrix (Smith form over Q[x]), monic.
inline std::vector<RatPoly> invariant_factors(PolyMatrix a) {
    const int n = static_cast<int>(a.size());
    std::vector<RatPoly> diag;
    for (int k = 0; k < n; ++k) {
        while (true) {
            int bi = -1, bj = -1;
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j)
                    if (!a[i][j].is_zero() && (bi < 0 || a[i][j].degree() < a[bi][bj].degree())) {
                        bi = i;
                        bj = j;
                    }
            if (bi < 0) {
                for (int r = k; r < n; ++r) diag.push_back(RatPoly());
                return diag;
            }
            std::swap(a[k], a[bi]);
            for (int i = 0; i < n; ++i) std::swap(a[i][k], a[i][bj]);
            bool clean = true;
            for (int i = k + 1; i < n; ++i) {
                if (a[i][k].is_zero()) continue;
                RatPoly q = divmod(a[i][k], a[k][k]).first;
                for (int j = k; j < n; ++j) a[i][j] = a[i][j] - q * a[k][j];
                if (!a[i][k].is_zero()) clean = false;
            }
            for (int j = k + 1; j < n; ++j) {
                if (a[k][j].is_zero()) continue;
                RatPoly q = divmod(a[k][j], a[k][k]).first;
                for (int i = k; i < n; ++i) a[i][j] = a[i][j] - q * a[i][k];
                if (!a[k][j].is_zero()) clean = false;
            }
            if (!clean) continue;
            // pivot must divide every remaining entry
            int bad = -1;
            for (int i = k + 1; i < n && bad < 0; ++i)
                for (int j = k + 1; j < n; ++j)
                    if (!divmod(a[i][j], a[k][k]).second.is_zero()) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            for (int j = k; j < n; ++j) a[k][j] = a[k][j] + a[bad][j];
        }
        diag.push_back(monic(a[k][k]));
    }
    return diag;
}

} // namespace detail

/// Invariant factors of xI - M (rational canonical form data).
inline std::vector<RatPoly> rational_invariant_factors(const IntMatrix& m) {
    const int n = m.n();
    detail::PolyMatrix a(n, std::vector<RatPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<BigRat> c{BigRat(-m(i, j))};
            if (i == j) c.push_back(BigRat(1));
            a[i][j] = RatPoly(std::move(c));
        }
    auto f = detail::invariant_factors(std::move(a));
    std::sort(f.begin(), f.end(), [](const RatPoly& x, const RatPoly& y) { return x.degree() < y.degree(); });
    return f;
}

inline bool similar_over_Q(const IntMatrix& a, const IntMatrix& b) {
    if (a.n() != b.n() || !a.square() || !b.square()) fail(ErrorKind::Domain, "dimension mismatch");
    if (charpoly(a) != charpoly(b)) return false;
    if (is_squarefree(charpoly(a))) return true; // cyclic: charpoly determines the class
    return rational_invariant_factors(a) == rational_invariant_factors(b);
}

/// Eigen-structure of an integer matrix with squarefree characteristic polynomial.
/// Eigenvectors are integer polynomial vectors v(x) with A v(r) = r v(r) at each
/// real root r (columns of adj(xI - A)); left eigenvectors are the matching rows.
struct EigenData {
    IntPoly charpoly;
    std::vector<RootBox> real_roots;
    int complex_pairs = 0;
    std::vector<RootBox> complex_moduli_sq;
    std::vector<std::vector<IntPoly>> eigenvectors;
    std::vector<std::vector<IntPoly>> left_eigenvectors;
};

inline EigenData eigen_data(const IntMatrix& m) {
    EigenData e;
    FaddeevLeVerrier f(m);
    e.charpoly = f.charpoly;
    if (!is_squarefree(e.charpoly)) fail(ErrorKind::SquarefreeViolation, "repeated eigenvalues");
    e.real_roots = sturm_isolate(e.charpoly);
    const int n = m.n();
    e.complex_pairs = (n - static_cast<int>(e.real_roots.size())) / 2;
    for (auto& root : e.real_roots) {
        std::optional<std::vector<IntPoly>> col, row;
        for (int j = 0; j < n && !col; ++j) {
            std::vector<IntPoly> v;
            bool nonzero = false;
            for (int i = 0; i < n; ++i) {
                v.push_back(f.adj_entry(i, j));
                if (alg_sign(v.back(), root) != 0) nonzero = true;
            }
            if (nonzero) col = v;
        }
        for (int i = 0; i < n && !row; ++i) {
            std::vector<IntPoly> w;
            bool nonzero = false;
            for (int j = 0; j < n; ++j) {
                w.push_back(f.adj_entry(i, j));
                if (alg_sign(w.back(), root) != 0) nonzero = true;
            }
            if (nonzero) row = w;
        }
        if (!col || !row) fail(ErrorKind::Internal, "adjugate vanishes at a simple eigenvalue");
        e.eigenvectors.push_back(*col);
        e.left_eigenvectors.push_back(*row);
    }
    if (e.complex_pairs > 0 && n <= 3) {
        for (auto& b : sturm_isolate(complex_modulus_poly(e.charpoly, det(m))))
            if (sgn(b.hi) > 0) e.complex_moduli_sq.push_back(b);
    }
    return e;
}

/// Basis over Q of {X : A X = X B}.
inline std::vector<RatMatrix> solve_sylvester_rational(const IntMatrix& a, const IntMatrix& b) {
    if (a.n() != b.n()) fail(ErrorKind::Domain, "dimension mismatch");
    const int n = a.n();
    RatMatrix sys(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int row = i * n + j;
            for (int k = 0; k < n; ++k) {
                sys(row, k * n + j) += BigRat(a(i, k));
                sys(row, i * n + k) -= BigRat(b(k, j));
            }
        }
    std::vector<RatMatrix> out;
    for (const auto& v : nullspace(sys)) {
        RatMatrix x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x(i, j) = v[i * n + j];
        out.push_back(x);
    }
    return out;
}

/// LLL-reduced integer basis of {X in Z^{n x n} : A X = X B}.
inline std::vector<IntMatrix> integer_intertwiners(const IntMatrix& a, const IntMatrix& b) {
    const int n = a.n();
    IntMatrix sys(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int row = i * n + j;
            for (int k = 0; k < n; ++k) {
                sys(row, k * n + j) += a(i, k);
                sys(row, i * n + k) -= b(k, j);
            }
        }
    auto basis = lll_reduce(integer_kernel(sys));
    std::vector<IntMatrix> out;
    for (const auto& v : basis) {
        IntMatrix x(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x(i, j) = v[i * n + j];
        out.push_back(x);
    }
    return out;
}

inline bool commutes(const IntMatrix& a, const IntMatrix& b) { return a * b == b * a; }

/// Exact witness check: A C = C B and det C = +-1 (or +1 when sl is set).
inline bool verify_witness(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, bool sl = false) {
    if (c.n() != a.n()) return false;
    BigInt d = det(c);
    if (sl ? d != 1 : abs(d) != 1) return false;
    return a * c == c * b;
}

} // namespace sailkit
