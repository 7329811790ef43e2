#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "sailkit/cubic.hpp"

namespace sailkit {

/// Open simplicial cone cut out by sigma_i f_i(v) > 0, where f_i is the left
/// eigen-functional of the i-th real eigenvalue.
struct EigenCone3 {
    std::shared_ptr<const CubicData> data;
    std::array<int, 3> sigma{1, 1, 1};
    std::array<int, 3> tau{1, 1, 1};  // r_j = tau_j E(lambda_j) lies on the cone's j-th ray

    double value(int i, const P3& v) const {
        const auto& w = data->w_approx[i];
        return sigma[i] * (w[0] * v[0] + w[1] * v[1] + w[2] * v[2]);
    }
    double error(int i, const P3& v) const {
        const auto& w = data->w_approx[i];
        return 1e-9 * (std::fabs(w[0] * v[0]) + std::fabs(w[1] * v[1]) + std::fabs(w[2] * v[2])) + 1e-300;
    }
    int side(int i, const P3& v) const {
        double x = value(i, v);
        if (std::fabs(x) > error(i, v)) return x > 0 ? 1 : -1;
        return sigma[i] * data->fields[i].sign(linear_form(data->W, v));
    }
    bool contains(const P3& v) const { return side(0, v) > 0 && side(1, v) > 0 && side(2, v) > 0; }

    std::array<double, 3> ray(int j) const {
        auto e = data->e_approx[j];
        for (double& x : e) x *= tau[j];
        return e;
    }
    /// Exact sign of n . r_j.
    int ray_sign(int j, const P3& n) const {
        auto r = ray(j);
        double x = n[0] * r[0] + n[1] * r[1] + n[2] * r[2];
        double err = 1e-9 * (std::fabs(n[0] * r[0]) + std::fabs(n[1] * r[1]) + std::fabs(n[2] * r[2])) + 1e-300;
        if (std::fabs(x) > err) return x > 0 ? 1 : -1;
        return tau[j] * data->fields[j].sign(linear_form(data->E, n));
    }
};

inline EigenCone3 eigen_cone(std::shared_ptr<const CubicData> d, std::array<int, 3> sigma) {
    if (d->cls != SpectrumClass::Klein) fail(ErrorKind::Domain, "eigen cone needs three real eigenvalues");
    for (int s : sigma)
        if (s != 1 && s != -1) fail(ErrorKind::Domain, "orthant signs must be +1 or -1");
    EigenCone3 c;
    c.sigma = sigma;
    RatPoly we;
    for (int k = 0; k < 3; ++k) we = we + to_rat(d->W[k]) * to_rat(d->E[k]);
    for (int j = 0; j < 3; ++j) {
        int s = d->fields[j].sign(we);
        if (s == 0) fail(ErrorKind::Internal, "eigenvector pairing vanished");
        c.tau[j] = s * sigma[j];
    }
    c.data = std::move(d);
    return c;
}

/// Orthant signs with sigma_0 = +1, in a fixed order; the other four are negatives.
inline std::array<std::array<int, 3>, 4> canonical_orthants() {
    return {{{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}};
}

struct SailFace3 {
    P3 normal{};
    long offset = 0;
    std::vector<int> verts;  // indices into KleinSailPatch::points, ccw about the normal
    bool certified = false;
    std::vector<int> neighbours;  // across edge (verts[i], verts[i+1]); -1 if unknown
};

/// The part of the Klein sail visible from a radius box. Certified faces are
/// supporting for the whole cone; the rest border the window and are provisional.
struct KleinSailPatch {
    EigenCone3 cone;
    long radius = 0;
    std::vector<P3> points;
    std::vector<SailFace3> faces;

    std::vector<int> certified_vertices() const {
        std::set<int> s;
        for (const auto& f : faces)
            if (f.certified) s.insert(f.verts.begin(), f.verts.end());
        return {s.begin(), s.end()};
    }
    std::vector<std::pair<int, int>> certified_edges() const {
        std::set<std::pair<int, int>> s;
        for (const auto& f : faces) {
            if (!f.certified) continue;
            for (size_t i = 0; i < f.verts.size(); ++i) {
                int a = f.verts[i], b = f.verts[(i + 1) % f.verts.size()];
                s.insert({std::min(a, b), std::max(a, b)});
            }
        }
        return {s.begin(), s.end()};
    }
    size_t certified_face_count() const {
        return std::count_if(faces.begin(), faces.end(), [](const SailFace3& f) { return f.certified; });
    }
};

namespace detail {

struct Candidate {
    P3 p;
    std::array<double, 3> u;
    double sum;
};

/// Lattice points of the half box, folded into the four canonical orthants and
/// reduced to those not clearly dominated in the cone order. A dropped point
/// lies in the interior of the hull, so no face is lost.
inline std::array<std::vector<P3>, 4> orthant_candidates(const CubicData& d, long radius) {
    EigenCone3 probe;
    probe.data = std::shared_ptr<const CubicData>(std::shared_ptr<const CubicData>{}, &d);
    std::array<std::vector<Candidate>, 4> buckets;
    for (long x = 0; x <= radius; ++x)
        for (long y = (x == 0 ? 0 : -radius); y <= radius; ++y)
            for (long z = (x == 0 && y == 0 ? 1 : -radius); z <= radius; ++z) {
                P3 v{x, y, z};
                std::array<int, 3> s{};
                for (int i = 0; i < 3; ++i) s[i] = probe.side(i, v);
                if (s[0] < 0) {
                    v = neg(v);
                    for (int& t : s) t = -t;
                }
                int idx = (s[1] < 0 ? 2 : 0) + (s[2] < 0 ? 1 : 0);
                Candidate c{v, {}, 0};
                for (int i = 0; i < 3; ++i) {
                    c.u[i] = std::fabs(probe.value(i, v));
                    c.sum += c.u[i];
                }
                buckets[idx].push_back(c);
            }
    std::array<std::vector<P3>, 4> out;
    for (int b = 0; b < 4; ++b) {
        auto& cs = buckets[b];
        std::sort(cs.begin(), cs.end(), [](const Candidate& p, const Candidate& q) {
            return p.sum != q.sum ? p.sum < q.sum : p.p < q.p;
        });
        std::vector<Candidate> kept;
        for (const auto& c : cs) {
            bool dominated = false;
            for (const auto& m : kept) {
                bool all = true;
                for (int i = 0; i < 3 && all; ++i) all = m.u[i] < c.u[i] - 1e-7 * (1 + c.u[i]);
                if (all) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) kept.push_back(c);
        }
        for (const auto& c : kept) out[b].push_back(c.p);
        std::sort(out[b].begin(), out[b].end());
    }
    return out;
}

inline int orthant_slot(const std::array<int, 3>& sigma) {
    return (sigma[1] * sigma[0] < 0 ? 2 : 0) + (sigma[2] * sigma[0] < 0 ? 1 : 0);
}

/// n is strictly inside the dual cone.
inline bool compact_normal(const EigenCone3& cone, const P3& n) {
    for (int j = 0; j < 3; ++j)
        if (cone.ray_sign(j, n) <= 0) return false;
    return true;
}

/// The cut-off simplex {x in cone : n.x < off} lies inside the radius box.
inline bool simplex_in_box(const EigenCone3& cone, const P3& n, long off, long radius) {
    if (off <= 0) return false;
    for (int j = 0; j < 3; ++j) {
        auto r = cone.ray(j);
        double nr = n[0] * r[0] + n[1] * r[1] + n[2] * r[2];
        for (double x : r)
            if (std::fabs(off * x / nr) > radius * (1 - 1e-9) - 1e-6) return false;
    }
    return true;
}

inline P3 rounded_dual_interior(const EigenCone3& cone) {
    const auto& d = *cone.data;
    for (double scale : {8.0, 64.0, 512.0, 4096.0, 32768.0}) {
        std::array<double, 3> acc{};
        for (int i = 0; i < 3; ++i) {
            const auto& w = d.w_approx[i];
            double len = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
            for (int k = 0; k < 3; ++k) acc[k] += cone.sigma[i] * w[k] / len;
        }
        P3 n{std::lround(acc[0] * scale), std::lround(acc[1] * scale), std::lround(acc[2] * scale)};
        if (!is_zero(n) && compact_normal(cone, n)) return n;
    }
    fail(ErrorKind::Internal, "no integer normal inside the dual cone");
}

inline KleinSailPatch patch_from_points(EigenCone3 cone, long radius, std::vector<P3> pts) {
    KleinSailPatch patch;
    patch.cone = cone;
    patch.radius = radius;
    auto accept = [&](const HullFace& f) {
        return compact_normal(cone, f.normal) && simplex_in_box(cone, f.normal, f.offset, radius);
    };
    auto start = initial_facet(pts, rounded_dual_interior(cone), accept);
    if (!start) fail(ErrorKind::RegionTooSmall, "no certified sail face at radius " + std::to_string(radius));
    HullWrap w = wrap_hull(pts, *start, accept);
    std::vector<int> remap(w.faces.size(), -1);
    for (size_t i = 0; i < w.faces.size(); ++i)
        if (w.faces[i].verts.size() >= 3 && (w.accepted[i] || compact_normal(cone, w.faces[i].normal))) {
            remap[i] = static_cast<int>(patch.faces.size());
            patch.faces.push_back({w.faces[i].normal, w.faces[i].offset, w.faces[i].verts, bool(w.accepted[i]), {}});
        }
    for (size_t i = 0; i < w.faces.size(); ++i) {
        if (remap[i] < 0) continue;
        auto& nb = patch.faces[remap[i]].neighbours;
        for (int x : w.neighbours[i]) nb.push_back(x < 0 ? -1 : remap[x]);
    }
    // keep only points that are vertices of some kept face
    std::vector<int> used(pts.size(), -1);
    for (auto& f : patch.faces)
        for (int& v : f.verts) {
            if (used[v] < 0) {
                used[v] = static_cast<int>(patch.points.size());
                patch.points.push_back(pts[v]);
            }
            v = used[v];
        }
    return patch;
}

} // namespace detail

/// Klein sail of the given orthant for a 3x3 matrix with three real eigenvalues.
inline KleinSailPatch klein_sail_patch(const IntMatrix& a, const std::array<int, 3>& sigma, long radius) {
    if (radius < 2) fail(ErrorKind::Domain, "radius must be at least 2");
    auto d = cubic_data(a);
    if (d->cls != SpectrumClass::Klein) fail(ErrorKind::Domain, "klein sail needs three real eigenvalues");
    auto cand = detail::orthant_candidates(*d, radius);
    std::array<int, 3> canon = sigma;
    if (sigma[0] < 0)
        for (int& s : canon) s = -s;
    auto patch = detail::patch_from_points(eigen_cone(d, canon), radius, cand[detail::orthant_slot(sigma)]);
    if (sigma[0] < 0) {
        patch.cone = eigen_cone(d, sigma);
        for (auto& p : patch.points) p = neg(p);
        for (auto& f : patch.faces) {
            f.normal = neg(f.normal);
            std::reverse(f.verts.begin(), f.verts.end());
            // edge i of the reversed face is edge k-2-i of the original
            std::vector<int> nb(f.neighbours.size());
            const size_t k = nb.size();
            for (size_t i = 0; i < k; ++i) nb[i] = f.neighbours[(2 * k - 2 - i) % k];
            f.neighbours = nb;
        }
    }
    return patch;
}

/// All four canonical orthant patches from one enumeration.
inline std::array<KleinSailPatch, 4> klein_sail_patches(const IntMatrix& a, long radius) {
    auto d = cubic_data(a);
    if (d->cls != SpectrumClass::Klein) fail(ErrorKind::Domain, "klein sail needs three real eigenvalues");
    auto cand = detail::orthant_candidates(*d, radius);
    std::array<KleinSailPatch, 4> out;
    auto orth = canonical_orthants();
    for (int i = 0; i < 4; ++i) out[i] = detail::patch_from_points(eigen_cone(d, orth[i]), radius, cand[detail::orthant_slot(orth[i])]);
    return out;
}

/// Exact check that n.x >= off for every nonzero lattice point of the cone, by
/// scanning the lattice points of the cut-off simplex.
inline bool plane_supports_cone(const EigenCone3& cone, const P3& n, long off) {
    if (!detail::compact_normal(cone, n) || off <= 0) return false;
    std::array<std::array<double, 3>, 4> corner{};
    for (int j = 0; j < 3; ++j) {
        auto r = cone.ray(j);
        double nr = n[0] * r[0] + n[1] * r[1] + n[2] * r[2];
        for (int k = 0; k < 3; ++k) corner[j + 1][k] = off * r[k] / nr;
    }
    std::array<long, 3> lo{}, hi{};
    for (int k = 0; k < 3; ++k) {
        double mn = 0, mx = 0;
        for (auto& c : corner) {
            mn = std::min(mn, c[k]);
            mx = std::max(mx, c[k]);
        }
        lo[k] = static_cast<long>(std::floor(mn)) - 1;
        hi[k] = static_cast<long>(std::ceil(mx)) + 1;
    }
    // solve for the coordinate of largest extent along lines
    int z = 0;
    for (int k = 1; k < 3; ++k)
        if (hi[k] - lo[k] > hi[z] - lo[z]) z = k;
    int x = (z + 1) % 3, y = (z + 2) % 3;
    for (long px = lo[x]; px <= hi[x]; ++px)
        for (long py = lo[y]; py <= hi[y]; ++py) {
            // linear constraints a + b t >= 0 along the line, t = coordinate z
            double tlo = static_cast<double>(lo[z]), thi = static_cast<double>(hi[z]);
            auto restrict = [&](double a, double b, double slack) {
                if (std::fabs(b) < 1e-300) {
                    if (a < -slack) thi = tlo - 1;
                    return;
                }
                double t = -a / b, s = slack / std::fabs(b);
                if (b > 0) tlo = std::max(tlo, t - s);
                else thi = std::min(thi, t + s);
            };
            for (int i = 0; i < 3; ++i) {
                const auto& w = cone.data->w_approx[i];
                double a = cone.sigma[i] * (w[x] * px + w[y] * py), b = cone.sigma[i] * w[z];
                restrict(a, b, 1e-6 * (1 + std::fabs(a) + std::fabs(b) * std::max(std::labs(lo[z]), std::labs(hi[z]))));
            }
            restrict(static_cast<double>(off - 1) - (n[x] * px + n[y] * py), -static_cast<double>(n[z]), 1e-6);
            if (tlo > thi) continue;
            for (long t = static_cast<long>(std::ceil(tlo)); t <= static_cast<long>(std::floor(thi)); ++t) {
                P3 p{};
                p[x] = px;
                p[y] = py;
                p[z] = t;
                if (is_zero(p)) continue;
                if (dot(n, p) < off && cone.contains(p)) return false;
            }
        }
    return true;
}

inline P3 apply3(const IntMatrix& g, const P3& v) {
    P3 out{};
    for (int i = 0; i < 3; ++i) {
        BigInt s = 0;
        for (int j = 0; j < 3; ++j) s += g(i, j) * BigInt(v[j]);
        if (!s.fits_slong_p()) fail(ErrorKind::Internal, "lattice point overflow");
        out[i] = s.get_si();
    }
    return out;
}

/// Row vector n times g.
inline P3 apply3_row(const P3& n, const IntMatrix& g) {
    P3 out{};
    for (int j = 0; j < 3; ++j) {
        BigInt s = 0;
        for (int i = 0; i < 3; ++i) s += BigInt(n[i]) * g(i, j);
        if (!s.fits_slong_p()) fail(ErrorKind::Internal, "normal overflow");
        out[j] = s.get_si();
    }
    return out;
}

/// Outcome of checking that generators carry certified vertices to sail vertices.
struct ActionCheck {
    size_t vertices = 0, images = 0, failures = 0;
    bool ok() const { return failures == 0 && images > 0; }
};

/// For each certified vertex v, each generator g and each certified face F at v,
/// the plane of gF is proved supporting by scanning its cut-off simplex; g v is
/// then a vertex of that face of the sail.
inline ActionCheck certify_generator_action(const KleinSailPatch& patch, const std::vector<IntMatrix>& gens) {
    ActionCheck out;
    std::map<int, std::vector<size_t>> faces_at;
    for (size_t i = 0; i < patch.faces.size(); ++i)
        if (patch.faces[i].certified)
            for (int v : patch.faces[i].verts) faces_at[v].push_back(i);
    std::map<std::pair<size_t, size_t>, bool> plane_ok;  // (generator, face)
    for (const auto& [v, fs] : faces_at) {
        ++out.vertices;
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            IntMatrix ginv = unimodular_inverse(gens[gi]);
            ++out.images;
            size_t fi = fs.front();
            auto key = std::pair(gi, fi);
            if (!plane_ok.count(key)) {
                const auto& f = patch.faces[fi];
                plane_ok[key] = plane_supports_cone(patch.cone, apply3_row(f.normal, ginv), f.offset);
            }
            P3 img = apply3(gens[gi], patch.points[v]);
            bool on_plane = dot(apply3_row(patch.faces[fi].normal, ginv), img) == patch.faces[fi].offset;
            if (!plane_ok[key] || !on_plane || !patch.cone.contains(img)) ++out.failures;
        }
    }
    return out;
}

/// One representative per orbit of sail cells, with its canonical combinatorial record.
struct FundamentalCell {
    std::vector<P3> vertices;
    std::vector<long> record;
};

struct FundamentalDomain3 {
    SpectrumClass cls = SpectrumClass::Klein;
    long radius = 0;
    std::vector<FundamentalCell> cells;  // sorted by record

    std::vector<std::vector<long>> records() const {
        std::vector<std::vector<long>> r;
        for (const auto& c : cells) r.push_back(c.record);
        return r;
    }
};

namespace detail {

inline long integer_length3(const P3& d) {
    long g = gcd3(d);
    if (g == 0) fail(ErrorKind::DegenerateSegment, "zero-length segment");
    return g;
}

/// Smallest of the rotations and reversals of a cyclic sequence of fixed-size blocks.
inline std::vector<long> canonical_cycle(const std::vector<std::vector<long>>& fwd, const std::vector<std::vector<long>>& rev) {
    std::vector<long> best;
    bool have = false;
    for (const auto* seq : {&fwd, &rev}) {
        const size_t k = seq->size();
        for (size_t s = 0; s < k; ++s) {
            std::vector<long> flat;
            for (size_t i = 0; i < k; ++i) {
                const auto& b = (*seq)[(s + i) % k];
                flat.insert(flat.end(), b.begin(), b.end());
            }
            if (!have || flat < best) {
                best = std::move(flat);
                have = true;
            }
        }
    }
    return best;
}

inline IntMatrix group_element(const DirichletGens& g, long a, long b, std::map<std::pair<long, long>, IntMatrix>& cache) {
    auto key = std::pair(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto pw = [](const IntMatrix& m, long e) { return e >= 0 ? mat_pow(m, e) : mat_pow(unimodular_inverse(m), -e); };
    IntMatrix m = pw(g.gens[0], a);
    if (g.gens.size() > 1) m = m * pw(g.gens[1], b);
    cache.emplace(key, m);
    return m;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

/// Coordinates of a point set in the basis of generator logarithms.
inline std::array<double, 2> log_position(const std::vector<double>& ell, const DirichletGens& g) {
    size_t n = ell.size();
    double mean = 0;
    for (double x : ell) mean += x;
    mean /= n;
    std::vector<double> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = ell[i] - (n > 1 ? mean : 0);
    auto dotv = [](const std::vector<double>& p, const std::vector<double>& q) {
        double s = 0;
        for (size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
        return s;
    };
    if (g.logs.size() == 1) return {dotv(c, g.logs[0]) / dotv(g.logs[0], g.logs[0]), 0};
    double a11 = dotv(g.logs[0], g.logs[0]), a12 = dotv(g.logs[0], g.logs[1]), a22 = dotv(g.logs[1], g.logs[1]);
    double b1 = dotv(c, g.logs[0]), b2 = dotv(c, g.logs[1]);
    double det = a11 * a22 - a12 * a12;
    return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

inline std::vector<P3> sorted_points(std::vector<P3> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace detail

/// Faces of the patch up to the Dirichlet group action. Certified faces and their
/// images under g1^a g2^b, |a|,|b| <= reach, are all true sail faces; stars and
/// adjacency are read from that extended complex. Each orbit needs a certified
/// member whose edges all have two faces there: the sail is connected, so this
/// closes the set of orbits under adjacency. Vertex degrees come from any group
/// image of the vertex whose star is complete.
inline FundamentalDomain3 klein_fundamental_domain(const KleinSailPatch& patch, const DirichletGens& gens, long reach = 2) {
    if (gens.gens.size() != 2) fail(ErrorKind::Domain, "klein fundamental domain needs two generators");
    const auto& cone = patch.cone;
    const std::string too_small = " at radius " + std::to_string(patch.radius) + "; try radius " + std::to_string(2 * patch.radius);

    auto position = [&](const std::array<double, 3>& c) {
        std::vector<double> ell;
        for (int i = 0; i < 3; ++i) {
            const auto& w = cone.data->w_approx[i];
            ell.push_back(std::log(cone.sigma[i] * (w[0] * c[0] + w[1] * c[1] + w[2] * c[2])));
        }
        return detail::log_position(ell, gens);
    };
    std::map<std::pair<long, long>, IntMatrix> cache;
    auto offset = [](const std::array<double, 2>& p, const std::array<double, 2>& q) -> std::optional<std::pair<long, long>> {
        double da = q[0] - p[0], db = q[1] - p[1];
        long a = std::lround(da), b = std::lround(db);
        if ((a == 0 && b == 0) || std::fabs(da - a) > 0.25 || std::fabs(db - b) > 0.25) return std::nullopt;
        return std::pair(a, b);
    };

    std::vector<std::vector<P3>> cyc;
    for (const auto& f : patch.faces) {
        if (!f.certified) continue;
        std::vector<P3> c;
        for (int v : f.verts) c.push_back(patch.points[v]);
        cyc.push_back(c);
    }
    if (cyc.empty()) fail(ErrorKind::RegionTooSmall, "no certified faces" + too_small);
    const size_t nf = cyc.size();
    std::vector<std::array<double, 2>> pos;
    std::vector<std::vector<P3>> vsets;
    for (const auto& c : cyc) {
        std::array<double, 3> m{};
        for (const auto& p : c)
            for (int k = 0; k < 3; ++k) m[k] += p[k] / double(c.size());
        pos.push_back(position(m));
        vsets.push_back(detail::sorted_points(c));
    }
    detail::UnionFind uf(nf);
    for (size_t i = 0; i < nf; ++i)
        for (size_t j = i + 1; j < nf; ++j) {
            if (vsets[i].size() != vsets[j].size()) continue;
            auto ab = offset(pos[i], pos[j]);
            if (!ab || uf.find(int(i)) == uf.find(int(j))) continue;
            IntMatrix g = detail::group_element(gens, ab->first, ab->second, cache);
            std::vector<P3> img;
            for (const auto& p : vsets[i]) img.push_back(apply3(g, p));
            if (detail::sorted_points(img) == vsets[j]) uf.unite(int(i), int(j));
        }

    // extended complex: certified faces and their small group images
    std::set<std::vector<P3>> seen;
    std::map<std::pair<P3, P3>, int> edge_count;
    std::map<P3, std::set<P3>> star;
    for (long a = -reach; a <= reach; ++a)
        for (long b = -reach; b <= reach; ++b) {
            IntMatrix g = detail::group_element(gens, a, b, cache);
            for (const auto& c : cyc) {
                std::vector<P3> img;
                for (const auto& p : c) img.push_back(apply3(g, p));
                if (!seen.insert(detail::sorted_points(img)).second) continue;
                for (size_t i = 0; i < img.size(); ++i) {
                    const P3& u = img[i];
                    const P3& w = img[(i + 1) % img.size()];
                    edge_count[{std::min(u, w), std::max(u, w)}]++;
                    star[u].insert(w);
                    star[w].insert(u);
                }
            }
        }
    auto complete = [&](const P3& v) {
        auto it = star.find(v);
        if (it == star.end()) return false;
        for (const auto& u : it->second)
            if (edge_count[{std::min(u, v), std::max(u, v)}] != 2) return false;
        return true;
    };
    std::map<P3, std::array<double, 2>> vpos;
    for (const auto& [v, nb] : star) vpos[v] = position({double(v[0]), double(v[1]), double(v[2])});
    auto degree = [&](const P3& v) -> long {
        if (complete(v)) return static_cast<long>(star[v].size());
        for (const auto& [w, nb] : star) {
            if (!complete(w)) continue;
            auto ab = offset(vpos[v], vpos[w]);
            if (ab && apply3(detail::group_element(gens, ab->first, ab->second, cache), v) == w) return static_cast<long>(nb.size());
        }
        fail(ErrorKind::RegionTooSmall, "no complete star for a vertex orbit" + too_small);
    };
    auto closed = [&](const std::vector<P3>& c) {
        for (size_t i = 0; i < c.size(); ++i) {
            const P3& u = c[i];
            const P3& w = c[(i + 1) % c.size()];
            if (edge_count[{std::min(u, w), std::max(u, w)}] != 2) return false;
        }
        return true;
    };

    std::map<int, std::vector<size_t>> orbits;
    for (size_t i = 0; i < nf; ++i) orbits[uf.find(int(i))].push_back(i);

    FundamentalDomain3 fd;
    fd.cls = SpectrumClass::Klein;
    fd.radius = patch.radius;
    for (const auto& [root, members] : orbits) {
        long best = -1;
        double best_norm = 0;
        for (size_t m : members) {
            if (!closed(cyc[m])) continue;
            double nrm = std::max(std::fabs(pos[m][0]), std::fabs(pos[m][1]));
            if (best < 0 || nrm < best_norm - 1e-9 || (std::fabs(nrm - best_norm) <= 1e-9 && vsets[m] < vsets[best])) {
                best = static_cast<long>(m);
                best_norm = nrm;
            }
        }
        if (best < 0) fail(ErrorKind::RegionTooSmall, "a face orbit has no member with known neighbours" + too_small);
        const auto& c = cyc[best];
        const size_t k = c.size();
        auto pt = [&](size_t i) { return c[i % k]; };
        P3 area_vec{0, 0, 0};
        for (size_t i = 0; i < k; ++i) area_vec = add(area_vec, cross(pt(i), pt(i + 1)));
        // per vertex: degree in the sail, integer sine of the face angle, length of the outgoing edge
        std::vector<std::vector<long>> fwd(k), rev(k);
        for (size_t i = 0; i < k; ++i) {
            P3 v = pt(i), prev = sub(pt(i + k - 1), v), next = sub(pt(i + 1), v);
            long lp = detail::integer_length3(prev), ln = detail::integer_length3(next);
            long cr = gcd3(cross(prev, next));
            if (cr == 0) fail(ErrorKind::DegenerateAngle, "collinear face corner");
            if (cr % (lp * ln) != 0) fail(ErrorKind::Internal, "integer sine is not integral");
            long deg = degree(v);
            fwd[i] = {deg, cr / (lp * ln), ln};
            rev[k - 1 - i] = {deg, cr / (lp * ln), lp};
        }
        FundamentalCell cell;
        cell.vertices = c;
        cell.record = {gcd3(area_vec), static_cast<long>(k)};
        auto cc = detail::canonical_cycle(fwd, rev);
        cell.record.insert(cell.record.end(), cc.begin(), cc.end());
        fd.cells.push_back(std::move(cell));
    }
    std::sort(fd.cells.begin(), fd.cells.end(), [](const FundamentalCell& p, const FundamentalCell& q) {
        return p.record != q.record ? p.record < q.record : p.vertices < q.vertices;
    });
    return fd;
}

} // namespace sailkit
