#pragma once

#include <algorithm>

#include "sailkit/klein.hpp"

namespace sailkit {

/// Image of a lattice point in the orbit half-plane: x is the real-eigenvalue
/// coordinate W(lambda).v and r2 = |W(c).v|^2, both exact elements of Q(lambda).
struct KVProjection {
    RatPoly x, r2;
    double x_approx = 0, r_approx = 0;
};

namespace detail {

/// Q_jk = (W_j(c) W_k(conj c) + W_k(c) W_j(conj c)) / 2 as polynomials in the real root,
/// using c + conj c = trace - lambda and c conj c = e2 - lambda (c + conj c).
struct KVForm {
    std::array<std::array<RatPoly, 3>, 3> q;
};

inline KVForm kv_form(const CubicData& d) {
    const RealRootField& f = d.fields[0];
    RatPoly lam = RatPoly::x();
    RatPoly s = RatPoly::constant(BigRat(-d.charpoly.coeff(2))) - lam;
    RatPoly p = f.reduce(RatPoly::constant(BigRat(d.charpoly.coeff(1))) - lam * s);
    std::vector<RatPoly> P{RatPoly::constant(BigRat(2)), s};
    for (int k = 2; k <= 4; ++k) P.push_back(f.reduce(s * P[k - 1] - p * P[k - 2]));
    std::vector<RatPoly> ppow{RatPoly::constant(BigRat(1))};
    for (int k = 1; k <= 2; ++k) ppow.push_back(f.mul(ppow.back(), p));
    KVForm out;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            RatPoly acc;
            const auto& wa = d.W[j].coeffs();
            const auto& wb = d.W[k].coeffs();
            for (size_t a = 0; a < wa.size(); ++a)
                for (size_t b = 0; b < wb.size(); ++b) {
                    if (wa[a] == 0 || wb[b] == 0) continue;
                    size_t lo = std::min(a, b), gap = a > b ? a - b : b - a;
                    acc = acc + BigRat(wa[a] * wb[b]) * f.mul(ppow[lo], P[gap]);
                }
            out.q[j][k] = f.reduce(BigRat(1, 2) * acc);
        }
    return out;
}

} // namespace detail

inline KVProjection kv_project(const CubicData& d, const detail::KVForm& form, const P3& v) {
    if (d.cls != SpectrumClass::KleinVoronoi) fail(ErrorKind::Domain, "kv projection needs one real eigenvalue");
    KVProjection out;
    out.x = linear_form(d.W, v);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            if (v[j] != 0 && v[k] != 0) out.r2 = out.r2 + BigRat(BigInt(v[j]) * BigInt(v[k])) * form.q[j][k];
    const auto& w = d.w_approx[0];
    out.x_approx = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
    std::complex<long double> z = d.wc[0] * (long double)v[0] + d.wc[1] * (long double)v[1] + d.wc[2] * (long double)v[2];
    out.r_approx = static_cast<double>(std::abs(z));
    return out;
}

inline KVProjection kv_project(const IntMatrix& a, const P3& v) {
    auto d = cubic_data(a);
    if (d->cls != SpectrumClass::KleinVoronoi) fail(ErrorKind::Domain, "kv projection needs one real eigenvalue");
    return kv_project(*d, detail::kv_form(*d), v);
}

struct KVPoint {
    P3 rep{};  // the unique integer point with this projection
    KVProjection proj;
};

/// Boundary chain of the factor-sail in one component, ordered by increasing |x|.
struct KVFactorSail {
    std::shared_ptr<const CubicData> data;
    int component = 1;
    long bound = 0;
    std::vector<KVPoint> chain;
    std::vector<bool> edge_certified;  // edge i joins chain[i] and chain[i+1]

    size_t certified_edge_count() const { return std::count(edge_certified.begin(), edge_certified.end(), true); }
};

namespace detail {

/// Exact sign of c + d sqrt(m) with m > 0.
inline int sign_c_d_sqrt(const RealRootField& f, const RatPoly& c, const RatPoly& d, const RatPoly& m) {
    int sc = f.sign(c), sd = f.sign(d);
    if (sd == 0) return sc;
    if (sc == 0 || sc == sd) return sd;
    int cmp = f.sign(f.mul(c, c) - f.mul(f.mul(d, d), m));
    return cmp > 0 ? sc : (cmp < 0 ? sd : 0);
}

/// Exact sign of a1 sqrt(m1) + a2 sqrt(m2) + a3 sqrt(m3) with m_i > 0.
inline int sign_sum_sqrt3(const RealRootField& f, const std::array<RatPoly, 3>& a, const std::array<RatPoly, 3>& m) {
    RatPoly zero;
    int sa = sign_c_d_sqrt(f, zero, a[0], m[0]);
    int sb = sign_c_d_sqrt(f, zero, a[1], m[1]);
    // sign of A = a1 sqrt m1 + a2 sqrt m2
    int sA;
    if (sa == 0) sA = sb;
    else if (sb == 0 || sa == sb) sA = sa;
    else {
        int cmp = f.sign(f.mul(f.mul(a[0], a[0]), m[0]) - f.mul(f.mul(a[1], a[1]), m[1]));
        sA = cmp > 0 ? sa : (cmp < 0 ? sb : 0);
    }
    int sB = f.sign(a[2]);
    if (sA == 0) return sB;
    if (sB == 0 || sA == sB) return sA;
    // compare A^2 = a1^2 m1 + a2^2 m2 + 2 a1 a2 sqrt(m1 m2) with B^2 = a3^2 m3
    RatPoly c = f.mul(f.mul(a[0], a[0]), m[0]) + f.mul(f.mul(a[1], a[1]), m[1]) - f.mul(f.mul(a[2], a[2]), m[2]);
    RatPoly d = BigRat(2) * f.mul(a[0], a[1]);
    int cmp = sign_c_d_sqrt(f, c, d, f.mul(m[0], m[1]));
    return cmp > 0 ? sA : (cmp < 0 ? sB : 0);
}

/// Orientation of three projected points in the (|x|, r) plane: +1 for a left turn.
inline int kv_orient(const RealRootField& f, int comp, const KVProjection& p, const KVProjection& q, const KVProjection& s) {
    double x1 = comp * p.x_approx, x2 = comp * q.x_approx, x3 = comp * s.x_approx;
    double val = (x2 - x1) * (s.r_approx - p.r_approx) - (q.r_approx - p.r_approx) * (x3 - x1);
    double mag = (std::fabs(x2) + std::fabs(x1)) * (s.r_approx + p.r_approx) + (q.r_approx + p.r_approx) * (std::fabs(x3) + std::fabs(x1));
    if (std::fabs(val) > 1e-9 * mag) return val > 0 ? 1 : -1;
    // val = r1 (x3 - x2) + r2 (x1 - x3) + r3 (x2 - x1), negated to left-turn convention
    BigRat sc(comp);
    std::array<RatPoly, 3> a{sc * (q.x - s.x), sc * (s.x - p.x), sc * (p.x - q.x)};
    return sign_sum_sqrt3(f, a, {p.r2, q.r2, s.r2});
}

} // namespace detail

/// Factor-sail chain of the component with sign(x) = component.
inline KVFactorSail kv_factor_sail(const IntMatrix& a, int component, long bound) {
    if (component != 1 && component != -1) fail(ErrorKind::Domain, "component must be + or -");
    if (bound < 1) fail(ErrorKind::Domain, "bound must be positive");
    auto d = cubic_data(a);
    if (d->cls != SpectrumClass::KleinVoronoi) fail(ErrorKind::Domain, "factor-sail needs one real eigenvalue");
    auto form = detail::kv_form(*d);
    const RealRootField& f = d->fields[0];

    // staircase prefilter in (|x|, r): a point beaten in both coordinates is interior
    struct Cand {
        P3 v;
        double x, r;
    };
    std::vector<Cand> cs;
    const auto& w = d->w_approx[0];
    for (long x = -bound; x <= bound; ++x)
        for (long y = -bound; y <= bound; ++y)
            for (long z = -bound; z <= bound; ++z) {
                P3 v{x, y, z};
                if (is_zero(v)) continue;
                double xv = w[0] * x + w[1] * y + w[2] * z;
                double err = 1e-9 * (std::fabs(w[0] * x) + std::fabs(w[1] * y) + std::fabs(w[2] * z));
                int s = std::fabs(xv) > err ? (xv > 0 ? 1 : -1) : f.sign(linear_form(d->W, v));
                if (s != component) continue;
                std::complex<long double> zc = d->wc[0] * (long double)x + d->wc[1] * (long double)y + d->wc[2] * (long double)z;
                cs.push_back({v, std::fabs(xv), static_cast<double>(std::abs(zc))});
            }
    if (cs.empty()) fail(ErrorKind::RegionTooSmall, "empty window");
    std::sort(cs.begin(), cs.end(), [](const Cand& p, const Cand& q) { return p.x != q.x ? p.x < q.x : p.v < q.v; });
    std::vector<Cand> stair;
    double best_r = 0;
    for (const auto& c : cs) {
        // keep unless some point with clearly smaller x has clearly smaller r
        if (!stair.empty() && best_r < c.r - 1e-7 * (1 + c.r)) {
            bool beaten = false;
            for (const auto& m : stair)
                if (m.x < c.x - 1e-7 * (1 + c.x) && m.r < c.r - 1e-7 * (1 + c.r)) {
                    beaten = true;
                    break;
                }
            if (beaten) continue;
        }
        stair.push_back(c);
        best_r = stair.size() == 1 ? c.r : std::min(best_r, c.r);
    }

    std::vector<KVPoint> pts;
    for (const auto& c : stair) pts.push_back({c.v, kv_project(*d, form, c.v)});
    std::sort(pts.begin(), pts.end(), [&](const KVPoint& p, const KVPoint& q) {
        double dx = component * (p.proj.x_approx - q.proj.x_approx);
        if (std::fabs(dx) > 1e-9 * (std::fabs(p.proj.x_approx) + std::fabs(q.proj.x_approx))) return dx < 0;
        return component * f.sign(p.proj.x - q.proj.x) < 0;
    });
    // lower hull, left to right
    std::vector<KVPoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && detail::kv_orient(f, component, hull[hull.size() - 2].proj, hull.back().proj, p.proj) <= 0) hull.pop_back();
        hull.push_back(p);
    }
    // keep the strictly descending part
    size_t end = 1;
    while (end < hull.size()) {
        const auto& p = hull[end - 1].proj;
        const auto& q = hull[end].proj;
        bool down = q.r_approx < p.r_approx - 1e-9 * p.r_approx || (std::fabs(q.r_approx - p.r_approx) <= 1e-9 * p.r_approx && f.sign(q.r2 - p.r2) < 0);
        if (!down) break;
        ++end;
    }
    hull.resize(end);

    KVFactorSail sail;
    sail.data = d;
    sail.component = component;
    sail.bound = bound;
    sail.chain = hull;
    // |v_j| <= alpha_j |x| + beta_j r, from v = x e / (W e) + 2 Re(z e_c / (W_c e_c))
    std::array<double, 3> alpha{}, beta{};
    {
        const auto& e = d->e_approx[0];
        double we = w[0] * e[0] + w[1] * e[1] + w[2] * e[2];
        std::complex<long double> wce = d->wc[0] * d->ec[0] + d->wc[1] * d->ec[1] + d->wc[2] * d->ec[2];
        for (int j = 0; j < 3; ++j) {
            alpha[j] = std::fabs(e[j] / we) * (1 + 1e-6);
            beta[j] = 2 * static_cast<double>(std::abs(d->ec[j] / wce)) * (1 + 1e-6);
        }
    }
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        double x1 = std::fabs(hull[i].proj.x_approx), r1 = hull[i].proj.r_approx;
        double x2 = std::fabs(hull[i + 1].proj.x_approx), r2 = hull[i + 1].proj.r_approx;
        // intercepts of the supporting line with the axes
        double slope = (r2 - r1) / (x2 - x1);
        double r0 = r1 - slope * x1, x0 = x1 - r1 / slope;
        bool ok = slope < 0 && r0 > 0 && x0 > 0;
        for (int j = 0; j < 3 && ok; ++j) ok = alpha[j] * x0 + beta[j] * r0 < bound * (1 - 1e-6) - 1e-6;
        sail.edge_certified.push_back(ok);
    }
    return sail;
}

/// Sub-chain from a vertex to its image under the expanding generator, recorded as
/// the cyclic word of (integer sine at the vertex, integer length of the next edge).
inline FundamentalDomain3 kv_fundamental_domain(const KVFactorSail& sail, const DirichletGens& gens) {
    if (gens.gens.size() != 1) fail(ErrorKind::Domain, "kv fundamental domain needs one generator");
    IntMatrix g = gens.logs[0][0] > 0 ? gens.gens[0] : unimodular_inverse(gens.gens[0]);
    const auto& ch = sail.chain;
    const auto& ok = sail.edge_certified;
    for (size_t i0 = 1; i0 + 1 < ch.size(); ++i0) {
        if (!ok[i0 - 1]) continue;
        P3 target = apply3(g, ch[i0].rep);
        size_t j = i0 + 1;
        bool good = true;
        while (j < ch.size() && ch[j].rep != target) {
            if (!ok[j - 1]) {
                good = false;
                break;
            }
            ++j;
        }
        if (!good || j >= ch.size() || !ok[j - 1]) continue;
        FundamentalDomain3 fd;
        fd.cls = SpectrumClass::KleinVoronoi;
        fd.radius = sail.bound;
        std::vector<std::vector<long>> word;
        FundamentalCell cell;
        for (size_t e = i0; e < j; ++e) {
            P3 prev = sub(ch[e - 1].rep, ch[e].rep), next = sub(ch[e + 1].rep, ch[e].rep);
            long lp = detail::integer_length3(prev), ln = detail::integer_length3(next);
            long c = gcd3(cross(prev, next));
            if (c % (lp * ln) != 0) fail(ErrorKind::Internal, "integer sine is not integral");
            word.push_back({c / (lp * ln), ln});
            cell.vertices.push_back(ch[e].rep);
        }
        cell.vertices.push_back(ch[j].rep);
        // least rotation only: the chain direction is fixed by increasing |x|
        std::vector<long> best;
        for (size_t s = 0; s < word.size(); ++s) {
            std::vector<long> flat;
            for (size_t i = 0; i < word.size(); ++i) flat.insert(flat.end(), word[(s + i) % word.size()].begin(), word[(s + i) % word.size()].end());
            if (s == 0 || flat < best) best = flat;
        }
        cell.record = {static_cast<long>(word.size())};
        cell.record.insert(cell.record.end(), best.begin(), best.end());
        fd.cells.push_back(std::move(cell));
        return fd;
    }
    fail(ErrorKind::RegionTooSmall, "factor-sail chain holds no full period at bound " + std::to_string(sail.bound));
}

} // namespace sailkit
