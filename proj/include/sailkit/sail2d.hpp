#pragma once

#include <vector>

#include "sailkit/cf.hpp"

namespace sailkit {

struct LatticePoint2 {
    BigInt x, y;

    friend bool operator==(const LatticePoint2&, const LatticePoint2&) = default;
    friend LatticePoint2 operator+(const LatticePoint2& a, const LatticePoint2& b) { return {a.x + b.x, a.y + b.y}; }
    friend LatticePoint2 operator-(const LatticePoint2& a, const LatticePoint2& b) { return {a.x - b.x, a.y - b.y}; }
    friend LatticePoint2 operator*(const BigInt& s, const LatticePoint2& a) { return {s * a.x, s * a.y}; }
};

inline BigInt cross(const LatticePoint2& a, const LatticePoint2& b) { return a.x * b.y - a.y * b.x; }

inline LatticePoint2 apply(const IntMatrix& m, const LatticePoint2& p) {
    return {m(0, 0) * p.x + m(0, 1) * p.y, m(1, 0) * p.x + m(1, 1) * p.y};
}

/// Number of lattice points inside the segment PQ, plus one.
inline BigInt integer_length(const LatticePoint2& p, const LatticePoint2& q) {
    if (p == q) fail(ErrorKind::DegenerateSegment, "integer length of a degenerate segment");
    return big_gcd(q.x - p.x, q.y - p.y);
}

/// Integer sine of the angle PQR: twice the triangle area over Il(PQ) Il(QR).
inline BigInt integer_sine(const LatticePoint2& p, const LatticePoint2& q, const LatticePoint2& r) {
    BigInt twice_area = abs(cross(p - q, r - q));
    if (twice_area == 0) fail(ErrorKind::DegenerateAngle, "integer sine of collinear points");
    BigInt denom = integer_length(p, q) * integer_length(q, r);
    if (twice_area % denom != 0) fail(ErrorKind::Internal, "integer sine is not an integer");
    return twice_area / denom;
}

/// Cone {x - w1 y >= 0, x - w2 y >= 0} bounded by the two eigenlines, where
/// (w_i, 1) spans eigenline i. It is the eigencone that contains (1, 0).
struct EigenCone2 {
    QuadraticSurd w1, w2;

    QuadraticSurd form(int i, const LatticePoint2& v) const {
        const QuadraticSurd& w = i == 0 ? w1 : w2;
        return QuadraticSurd(v.x) - w * QuadraticSurd(v.y);
    }
    bool contains(const LatticePoint2& v) const { return form(0, v).sign() >= 0 && form(1, v).sign() >= 0; }

    /// Orientation sign of a walk along the sail toward the w1 eigenline.
    /// Read in this direction the LLS word lists the CF digits of w1 in order.
    int toward_w1() const { return (w1 - w2).sign(); }
};

struct SailChain2D {
    std::vector<LatticePoint2> vertices;
    EigenCone2 cone;
    std::vector<BigInt> lls;
};

inline EigenCone2 eigencone(const IntMatrix& a) {
    QuadraticSurd w = slope_of_expanding_eigenvector(a);
    return {w, w.conjugate()};
}

namespace detail {

/// Some E with cross(v, E) = 1, for primitive v.
inline LatticePoint2 unimodular_partner(const LatticePoint2& v) {
    BigInt g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v.x.get_mpz_t(), v.y.get_mpz_t());
    if (g != 1 && g != -1) fail(ErrorKind::Internal, "sail vertex is not primitive");
    // s x + t y = g; E = (-t, s) gives cross(v, E) = x s + y t = g
    LatticePoint2 e{-t, s};
    if (g == -1) e = BigInt(-1) * e;
    return e;
}

/// The first sail vertex: the minimiser of the rational form f1 + f2 = 2x - (w1 + w2) y.
inline LatticePoint2 first_vertex(const EigenCone2& k) {
    QuadraticSurd trace_w = k.w1 + k.w2;
    BigRat t = trace_w.to_rational();
    QuadraticSurd gap = k.w1 - k.w2;
    if (gap.sign() < 0) gap = -gap;
    BigInt ybound = (QuadraticSurd(2L) / gap).floor();
    bool have = false;
    LatticePoint2 best;
    BigRat best_g;
    for (BigInt y = -ybound; y <= ybound; ++y) {
        QuadraticSurd sy(y);
        BigInt xlo = std::max((k.w1 * sy).ceil(), (k.w2 * sy).ceil());
        BigInt xhi = floor_of((2 + t * y) / 2);
        for (BigInt x = xlo; x <= xhi; ++x) {
            if (x == 0 && y == 0) continue;
            LatticePoint2 v{x, y};
            BigRat g = 2 * BigRat(x) - t * y;
            if (!have || g < best_g || (g == best_g && k.form(0, v) < k.form(0, best))) {
                have = true;
                best = v;
                best_g = g;
            }
        }
    }
    if (!have) fail(ErrorKind::Internal, "no lattice point found in the eigencone");
    return best;
}

/// Next sail vertex after v on the side where cross(v, .) has sign sigma.
inline std::pair<LatticePoint2, BigInt> next_vertex(const EigenCone2& k, const LatticePoint2& v, int sigma) {
    LatticePoint2 e = unimodular_partner(v);
    if (sigma < 0) e = BigInt(-1) * e;
    // lattice points at height sigma: e + s v; the cone cuts out s >= s_lo
    QuadraticSurd s_lo;
    for (int i = 0; i < 2; ++i) {
        QuadraticSurd bound = -k.form(i, e) / k.form(i, v);
        if (i == 0 || bound > s_lo) s_lo = bound;
    }
    BigInt s = s_lo.ceil();
    LatticePoint2 w = e + s * v;
    LatticePoint2 dir = w - v;
    bool bounded = false;
    QuadraticSurd mmax;
    for (int i = 0; i < 2; ++i) {
        QuadraticSurd fd = k.form(i, dir);
        if (fd.sign() >= 0) continue;
        QuadraticSurd lim = k.form(i, v) / (-fd);
        if (!bounded || lim < mmax) mmax = lim;
        bounded = true;
    }
    if (!bounded) fail(ErrorKind::Internal, "unbounded sail edge for an irrational cone");
    BigInt m = mmax.floor();
    if (m < 1) fail(ErrorKind::Internal, "sail edge of non-positive length");
    return {v + m * dir, m};
}

} // namespace detail

inline std::vector<BigInt> lls_sequence(const std::vector<LatticePoint2>& v) {
    if (v.size() < 3) fail(ErrorKind::TooShort, "LLS sequence needs at least three vertices");
    std::vector<BigInt> out;
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        if (i > 0) out.push_back(integer_sine(v[i - 1], v[i], v[i + 1]));
        out.push_back(integer_length(v[i], v[i + 1]));
    }
    return out;
}

inline std::vector<BigInt> lls_sequence(const SailChain2D& chain) { return lls_sequence(chain.vertices); }

/// A window of consecutive sail vertices of the eigencone containing (1, 0),
/// centred on the vertex that minimises f1 + f2.
inline SailChain2D sail_vertices(const IntMatrix& a, size_t window) {
    require_hyperbolic_irreducible_2x2(a, "sail_vertices");
    if (window < 3) fail(ErrorKind::Domain, "sail window must be >= 3");
    SailChain2D chain;
    chain.cone = eigencone(a);
    LatticePoint2 v0 = detail::first_vertex(chain.cone);
    size_t back = (window - 1) / 2, fwd = window - 1 - back;
    std::vector<LatticePoint2> before;
    LatticePoint2 cur = v0;
    for (size_t i = 0; i < back; ++i) {
        cur = detail::next_vertex(chain.cone, cur, -chain.cone.toward_w1()).first;
        before.push_back(cur);
    }
    chain.vertices.assign(before.rbegin(), before.rend());
    chain.vertices.push_back(v0);
    cur = v0;
    for (size_t i = 0; i < fwd; ++i) {
        cur = detail::next_vertex(chain.cone, cur, chain.cone.toward_w1()).first;
        chain.vertices.push_back(cur);
    }
    chain.lls = lls_sequence(chain.vertices);
    return chain;
}

/// Minimal power or sign change of A with positive eigenvalues; it maps each
/// eigencone, and so each sail, onto itself.
inline IntMatrix positive_sail_generator(const IntMatrix& a) {
    if (det(a) == -1) return a * a;
    if (sgn(a.trace()) < 0) return -a;
    return a;
}

struct LlsPeriod {
    PeriodWord word;
    std::vector<BigInt> raw;  // flat LLS word between a vertex and its image
    size_t vertex_shift = 0;  // number of sail edges the generator advances
};

inline LlsPeriod lls_period_detail(const IntMatrix& a, size_t max_steps = 100000) {
    require_hyperbolic_irreducible_2x2(a, "lls_period");
    EigenCone2 k = eigencone(a);
    IntMatrix g = positive_sail_generator(a);
    LatticePoint2 v0 = detail::first_vertex(k);
    LatticePoint2 t1 = apply(g, v0), t2 = apply(unimodular_inverse(g), v0);
    std::vector<LatticePoint2> walk{v0};
    for (size_t i = 0; i < max_steps; ++i) {
        walk.push_back(detail::next_vertex(k, walk.back(), k.toward_w1()).first);
        if (walk.back() == t1 || walk.back() == t2) {
            walk.push_back(detail::next_vertex(k, walk.back(), k.toward_w1()).first);
            std::vector<BigInt> seq = lls_sequence(walk); // Il, Isin, ..., Il, Isin, Il
            seq.pop_back();                               // drop the edge after the image
            LlsPeriod out;
            out.raw = seq;
            out.word = PeriodWord(primitive_root(seq));
            out.vertex_shift = walk.size() - 2;
            return out;
        }
    }
    fail(ErrorKind::Internal, "generator image not reached along the sail");
}

inline PeriodWord lls_period(const IntMatrix& a) { return lls_period_detail(a).word; }

} // namespace sailkit
