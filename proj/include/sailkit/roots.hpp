#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "sailkit/poly.hpp"

namespace sailkit {

/// Closed rational interval; used for certified enclosures.
struct RatInterval {
    BigRat lo, hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(const BigRat& v) : lo(v), hi(v) {} // NOLINT(implicit)
    RatInterval(const BigInt& v) : lo(v), hi(v) {} // NOLINT(implicit)
    RatInterval(BigRat l, BigRat h) : lo(std::move(l)), hi(std::move(h)) {}

    bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
    int sign() const { return sgn(lo) > 0 ? 1 : (sgn(hi) < 0 ? -1 : 0); }
    BigRat width() const { return hi - lo; }

    friend RatInterval operator+(const RatInterval& a, const RatInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
    friend RatInterval operator*(const RatInterval& a, const RatInterval& b) {
        BigRat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
    }
};

/// Sturm sequence of a squarefree polynomial.
class SturmChain {
public:
    explicit SturmChain(const IntPoly& p) {
        RatPoly a = to_rat(p), b = a.derivative();
        chain_.push_back(a);
        while (!b.is_zero()) {
            chain_.push_back(b);
            RatPoly r = divmod(a, b).second;
            a = std::move(b);
            b = -r;
        }
    }

    int variations_at(const BigRat& x) const {
        int v = 0, last = 0;
        for (const auto& q : chain_) {
            int s = sgn(q.eval(x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    }

    int variations_at_infinity(bool positive) const {
        int v = 0, last = 0;
        for (const auto& q : chain_) {
            int s = sgn(q.leading());
            if (!positive && q.degree() % 2 == 1) s = -s;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    }

    /// Number of distinct real roots in (a, b].
    int count(const BigRat& a, const BigRat& b) const { return variations_at(a) - variations_at(b); }
    int count_all() const { return variations_at_infinity(false) - variations_at_infinity(true); }

private:
    std::vector<RatPoly> chain_;
};

/// A rational interval isolating exactly one real root of a squarefree polynomial.
/// Either lo == hi (an exact rational root) or lo < hi with poly(lo), poly(hi)
/// nonzero and of opposite sign.
struct RootBox {
    IntPoly poly;
    BigRat lo, hi;
    int multiplicity = 1;

    bool exact() const { return lo == hi; }
    RatInterval interval() const { return {lo, hi}; }
    double approx() const {
        BigRat mid = (lo + hi) / 2;
        return mid.get_d();
    }
};

/// Strict bound: every root has absolute value < cauchy_bound.
inline BigRat cauchy_bound(const IntPoly& p) {
    BigRat m = 0;
    for (int i = 0; i < p.degree(); ++i) {
        BigRat r = make_rat(abs(p.coeff(i)), abs(p.leading()));
        if (r > m) m = r;
    }
    return m + 1;
}

namespace detail {

inline void isolate_range(const IntPoly& p, const SturmChain& sc, BigRat a, BigRat b, int n,
                          std::vector<RootBox>& out) {
    // invariant: p(a) != 0, p(b) != 0, n = number of roots in (a, b)
    if (n == 0) return;
    if (n == 1) {
        out.push_back(RootBox{p, a, b, 1});
        return;
    }
    BigRat m = (a + b) / 2;
    if (sgn(p.eval(m)) != 0) {
        int left = sc.count(a, m);
        isolate_range(p, sc, a, m, left, out);
        isolate_range(p, sc, m, b, n - left, out);
        return;
    }
    // m is an exact root: carve out a root-free neighbourhood on both sides
    BigRat delta = (b - a) / 4;
    while (true) {
        BigRat l = m - delta, r = m + delta;
        if (sgn(p.eval(l)) != 0 && sgn(p.eval(r)) != 0 && sc.count(l, r) == 1) {
            int left = sc.count(a, l);
            isolate_range(p, sc, a, l, left, out);
            out.push_back(RootBox{p, m, m, 1});
            isolate_range(p, sc, r, b, n - left - 1, out);
            return;
        }
        delta /= 2;
    }
}

} // namespace detail

/// Halves the width of a box once (no-op for exact boxes).
inline void root_bisect(RootBox& box) {
    if (box.exact()) return;
    BigRat m = (box.lo + box.hi) / 2;
    int slo = sgn(box.poly.eval(box.lo));
    int sm = sgn(box.poly.eval(m));
    if (sm == 0) {
        box.lo = box.hi = m;
        return;
    }
    if (sm == slo) box.lo = m; else box.hi = m;
}

/// Isolates every real root of a squarefree integer polynomial, sorted ascending.
inline std::vector<RootBox> sturm_isolate(const IntPoly& p) {
    if (p.degree() < 1) return {};
    if (!is_squarefree(p)) fail(ErrorKind::SquarefreeViolation, "polynomial is not squarefree: " + p.str());
    SturmChain sc(p);
    BigRat b = cauchy_bound(p);
    std::vector<RootBox> out;
    detail::isolate_range(p, sc, -b, b, sc.count(-b, b), out);
    // neighbouring boxes may share an endpoint; shrink until pairwise disjoint
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        while (out[i].hi >= out[i + 1].lo) {
            root_bisect(out[i]);
            root_bisect(out[i + 1]);
        }
    }
    return out;
}

/// Bisects until the box is no wider than eps.
inline RootBox root_refine(RootBox box, const BigRat& eps) {
    if (box.exact()) return box;
    int slo = sgn(box.poly.eval(box.lo));
    while (box.hi - box.lo > eps) {
        BigRat m = (box.lo + box.hi) / 2;
        int sm = sgn(box.poly.eval(m));
        if (sm == 0) {
            box.lo = box.hi = m;
            break;
        }
        if (sm == slo) box.lo = m; else box.hi = m;
    }
    return box;
}

template <typename T>
RatInterval eval_interval(const Poly<T>& h, const RatInterval& x) {
    RatInterval acc(BigRat(0));
    const auto& c = h.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + RatInterval(BigRat(*it));
    return acc;
}

/// Exact sign of h(root) where root is the real number isolated by box.
///
/// Zero is certified by checking that gcd(h, poly) has a root inside the box;
/// otherwise the box is refined until interval evaluation excludes zero.
/// The box is refined in place so repeated queries get cheaper.
inline int alg_sign(const RatPoly& h, RootBox& box) {
    if (h.is_zero()) return 0;
    if (box.exact()) return sgn(h.eval(box.lo));
    RatPoly g = poly_gcd(to_rat(box.poly), h);
    if (g.degree() > 0) {
        IntPoly gi = primitive_part(g);
        // roots of g are roots of poly; the box isolates exactly one root of poly
        SturmChain sc(gi);
        int inside = sc.count(box.lo, box.hi);
        if (sgn(gi.eval(box.lo)) == 0) ++inside; // cannot happen for a proper box
        if (inside > 0) return 0;
    }
    while (true) {
        RatInterval v = eval_interval(h, box.interval());
        if (v.sign() != 0) return v.sign();
        root_bisect(box);
        if (box.exact()) return sgn(h.eval(box.lo));
    }
}

inline int alg_sign(const IntPoly& h, RootBox& box) { return alg_sign(to_rat(h), box); }

} // namespace sailkit
