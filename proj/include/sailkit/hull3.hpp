#pragma once

#include <array>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <algorithm>
#include <vector>

#include "sailkit/error.hpp"

namespace sailkit {

using P3 = std::array<long, 3>;
using I128 = __int128;

inline P3 sub(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline P3 add(const P3& a, const P3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline P3 neg(const P3& a) { return {-a[0], -a[1], -a[2]}; }
inline P3 cross(const P3& a, const P3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline I128 dot(const P3& a, const P3& b) { return I128(a[0]) * b[0] + I128(a[1]) * b[1] + I128(a[2]) * b[2]; }
inline bool is_zero(const P3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

inline long gcd3(const P3& a) { return std::gcd(std::gcd(std::labs(a[0]), std::labs(a[1])), std::labs(a[2])); }

inline P3 primitive(const P3& a) {
    long g = gcd3(a);
    if (g == 0) fail(ErrorKind::Internal, "zero normal");
    return {a[0] / g, a[1] / g, a[2] / g};
}

/// Polygonal facet of the hull of a point set, with the inner normal: every point
/// p satisfies normal . p >= offset. Vertices run counter-clockwise about the normal
/// and carry no collinear interior points.
struct HullFace {
    P3 normal{};
    long offset = 0;
    std::vector<int> verts;
};

namespace detail {

/// Convex polygon of the given coplanar points, counter-clockwise about n.
inline std::vector<int> planar_hull(const std::vector<P3>& pts, const std::vector<int>& idx, const P3& n) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::labs(n[i]) > std::labs(n[k])) k = i;
    int u = (k + 1) % 3, w = (k + 2) % 3;
    std::vector<int> s = idx;
    std::sort(s.begin(), s.end(), [&](int a, int b) {
        return std::pair(pts[a][u], pts[a][w]) < std::pair(pts[b][u], pts[b][w]);
    });
    auto turn = [&](int o, int a, int b) {
        I128 v = I128(pts[a][u] - pts[o][u]) * (pts[b][w] - pts[o][w]) - I128(pts[a][w] - pts[o][w]) * (pts[b][u] - pts[o][u]);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    std::vector<int> h(2 * s.size() + 1);
    size_t m = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        while (m >= 2 && turn(h[m - 2], h[m - 1], s[i]) <= 0) --m;
        h[m++] = s[i];
    }
    for (size_t i = s.size() - 1, t = m + 1; i-- > 0;) {
        while (m >= t && turn(h[m - 2], h[m - 1], s[i]) <= 0) --m;
        h[m++] = s[i];
    }
    h.resize(m > 0 ? m - 1 : 0);
    if (n[k] < 0) std::reverse(h.begin(), h.end());
    return h;
}

inline bool supporting(const std::vector<P3>& pts, const P3& m, long off) {
    for (const auto& p : pts)
        if (dot(m, p) < off) return false;
    return true;
}

inline HullFace face_on_plane(const std::vector<P3>& pts, P3 m) {
    HullFace f;
    f.normal = primitive(m);
    std::vector<int> on;
    bool first = true;
    for (size_t i = 0; i < pts.size(); ++i) {
        I128 d = dot(f.normal, pts[i]);
        if (first || d < f.offset) {
            f.offset = static_cast<long>(d);
            first = false;
        }
    }
    for (size_t i = 0; i < pts.size(); ++i)
        if (dot(f.normal, pts[i]) == f.offset) on.push_back(static_cast<int>(i));
    f.verts = planar_hull(pts, on, f.normal);
    return f;
}

} // namespace detail

/// Facets reachable from a starting facet by crossing edges, where only facets
/// accepted by the predicate are crossed. Faces are indexed by plane.
struct HullWrap {
    std::vector<HullFace> faces;
    std::vector<bool> accepted;
    /// neighbours[f][i]: face across edge (verts[i], verts[i+1]) of face f, or -1.
    std::vector<std::vector<int>> neighbours;
};

/// Finds a facet through the minimiser of n0 . p, trying partner pairs in order of n0 . p.
inline std::optional<HullFace> initial_facet(const std::vector<P3>& pts, const P3& n0,
                                             const std::function<bool(const HullFace&)>& accept) {
    if (pts.size() < 3) return std::nullopt;
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        I128 da = dot(n0, pts[a]), db = dot(n0, pts[b]);
        return da != db ? da < db : pts[a] < pts[b];
    });
    const P3& v0 = pts[order[0]];
    for (size_t j = 2; j < order.size(); ++j)
        for (size_t i = 1; i < j; ++i) {
            P3 m = cross(sub(pts[order[i]], v0), sub(pts[order[j]], v0));
            if (is_zero(m)) continue;
            bool pos = false, negs = false;
            for (const auto& p : pts) {
                I128 s = dot(m, sub(p, v0));
                if (s > 0) pos = true;
                if (s < 0) negs = true;
                if (pos && negs) break;
            }
            if (pos && negs) continue;
            HullFace f = detail::face_on_plane(pts, negs ? neg(m) : m);
            if (f.verts.size() >= 3 && accept(f)) return f;
        }
    return std::nullopt;
}

/// Gift wrapping from an accepted facet; faces with fewer than three vertices are discarded.
inline HullWrap wrap_hull(const std::vector<P3>& pts, const HullFace& start,
                          const std::function<bool(const HullFace&)>& accept, size_t max_faces = 200000) {
    HullWrap w;
    std::map<std::pair<P3, long>, int> index;
    auto add_face = [&](HullFace f) {
        auto key = std::pair(f.normal, f.offset);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(w.faces.size());
        index.emplace(key, id);
        w.accepted.push_back(f.verts.size() >= 3 && accept(f));
        w.neighbours.emplace_back(f.verts.size(), -1);
        w.faces.push_back(std::move(f));
        return id;
    };
    std::vector<char> queued;
    std::deque<int> queue;
    auto enqueue = [&](int id) {
        if (static_cast<size_t>(id) >= queued.size()) queued.resize(id + 1, 0);
        if (queued[id] || !w.accepted[id]) return;
        queued[id] = 1;
        queue.push_back(id);
    };
    enqueue(add_face(start));
    while (!queue.empty()) {
        int fid = queue.front();
        queue.pop_front();
        const size_t k = w.faces[fid].verts.size();
        for (size_t e = 0; e < k; ++e) {
            const HullFace& f = w.faces[fid];
            const P3& a = pts[f.verts[e]];
            const P3& b = pts[f.verts[(e + 1) % k]];
            const P3& c = pts[f.verts[(e + 2) % k]];
            P3 ab = sub(b, a);
            bool have = false;
            P3 m{};
            for (const auto& r : pts) {
                P3 mr = cross(ab, sub(r, a));
                if (is_zero(mr)) continue;
                I128 s = dot(mr, sub(c, a));
                if (s == 0) continue;
                if (!have || dot(m, sub(r, a)) < 0) {
                    m = s > 0 ? mr : neg(mr);
                    have = true;
                }
            }
            if (!have) continue;
            int nid = add_face(detail::face_on_plane(pts, m));
            w.neighbours[fid][e] = nid;
            if (w.faces.size() > max_faces) fail(ErrorKind::Internal, "hull wrap exceeded face limit");
            enqueue(nid);
        }
    }
    return w;
}

} // namespace sailkit
