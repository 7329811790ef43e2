#pragma once

#include <optional>
#include <sstream>

#include "sailkit/kv.hpp"

namespace sailkit {

/// Canonical combinatorial summary of the sails of a 3x3 operator. For the
/// all-real case each part is the sorted face records of one orthant pair's
/// fundamental domain; for the Klein-Voronoi case each part is one component's
/// period word. Parts are sorted because orthant labels are not canonical.
struct Invariant3 {
    SpectrumClass cls = SpectrumClass::Klein;
    std::vector<std::vector<std::vector<long>>> parts;
    long radius = 0;  // window at which it was certified; not part of equality

    friend bool operator==(const Invariant3& a, const Invariant3& b) { return a.cls == b.cls && a.parts == b.parts; }

    std::string str() const {
        std::ostringstream os;
        os << to_string(cls) << ":";
        for (const auto& p : parts) {
            os << "{";
            for (size_t i = 0; i < p.size(); ++i) {
                os << (i ? " " : "") << "(";
                for (size_t j = 0; j < p[i].size(); ++j) os << (j ? "," : "") << p[i][j];
                os << ")";
            }
            os << "}";
        }
        return os.str();
    }
};

/// Unimodular V making the eigen-functionals of V^-1 A V well conditioned:
/// LLL on Z^3 for the quadratic form sum_i |w_i . x|^2 of unit-normalised functionals.
inline IntMatrix conditioning_basis(const CubicData& d) {
    std::vector<std::array<double, 3>> rows;
    auto push_unit = [&](std::array<double, 3> w) {
        double len = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        for (double& x : w) x /= len;
        rows.push_back(w);
    };
    for (const auto& w : d.w_approx) push_unit(w);
    if (d.cls == SpectrumClass::KleinVoronoi) {
        double len = 0;
        for (const auto& z : d.wc) len += static_cast<double>(std::norm(z));
        len = std::sqrt(len);
        std::array<double, 3> re{}, im{};
        for (int j = 0; j < 3; ++j) {
            re[j] = static_cast<double>(d.wc[j].real()) / len;
            im[j] = static_cast<double>(d.wc[j].imag()) / len;
        }
        rows.push_back(re);
        rows.push_back(im);
    }
    double g[3][3] = {};
    for (const auto& r : rows)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g[i][j] += r[i] * r[j];
    std::array<std::array<long, 3>, 3> b{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // basis vectors
    auto ip = [&](const std::array<long, 3>& u, const std::array<long, 3>& v) {
        double s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += u[i] * g[i][j] * v[j];
        return s;
    };
    for (int iter = 0; iter < 1000; ++iter) {
        // Gram-Schmidt
        double mu[3][3] = {}, bstar[3][3] = {}, nrm[3] = {};
        auto ipd = [&](const double* u, const double* v) {
            double s = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += u[i] * g[i][j] * v[j];
            return s;
        };
        for (int k = 0; k < 3; ++k) {
            for (int i = 0; i < 3; ++i) bstar[k][i] = b[k][i];
            for (int j = 0; j < k; ++j) {
                double bk[3] = {double(b[k][0]), double(b[k][1]), double(b[k][2])};
                mu[k][j] = ipd(bk, bstar[j]) / nrm[j];
                for (int i = 0; i < 3; ++i) bstar[k][i] -= mu[k][j] * bstar[j][i];
            }
            nrm[k] = ipd(bstar[k], bstar[k]);
        }
        bool changed = false;
        for (int k = 1; k < 3 && !changed; ++k) {
            for (int j = k - 1; j >= 0; --j) {
                long q = std::lround(mu[k][j]);
                if (q != 0) {
                    for (int i = 0; i < 3; ++i) b[k][i] -= q * b[j][i];
                    changed = true;
                }
            }
            if (changed) break;
            if (nrm[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1]) {
                std::swap(b[k], b[k - 1]);
                changed = true;
            }
        }
        if (!changed) break;
    }
    (void)ip;
    IntMatrix v(3, 3);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) v(i, k) = b[k][i];
    if (abs(det(v)) != 1) fail(ErrorKind::Internal, "conditioning basis is not unimodular");
    return v;
}

/// Radii tried in turn when a window is too small for a full fundamental domain.
inline const std::vector<long>& invariant_radii() {
    static const std::vector<long> r{8, 12, 16, 24, 32, 48, 64, 96};
    return r;
}

namespace detail {

inline Invariant3 invariant_at(const IntMatrix& a, const DirichletGens& gens, SpectrumClass cls, long radius) {
    Invariant3 inv;
    inv.cls = cls;
    inv.radius = radius;
    if (cls == SpectrumClass::Klein) {
        for (const auto& patch : klein_sail_patches(a, radius)) inv.parts.push_back(klein_fundamental_domain(patch, gens).records());
    } else {
        for (int comp : {1, -1}) inv.parts.push_back(kv_fundamental_domain(kv_factor_sail(a, comp, radius), gens).records());
    }
    std::sort(inv.parts.begin(), inv.parts.end());
    return inv;
}

} // namespace detail

/// Conjugation-invariant sail summary. The operator is first moved to a well
/// conditioned lattice basis; the window grows until a fundamental domain fits
/// and the result is confirmed at twice that window. No enumeration exceeds max_radius.
inline Invariant3 invariant3(const IntMatrix& a, long max_radius = 192) {
    auto d = cubic_data(a);
    IntMatrix v = conditioning_basis(*d);
    IntMatrix ac = unimodular_inverse(v) * a * v;
    DirichletGens gens = dirichlet_generators(ac);
    for (long r : invariant_radii()) {
        if (2 * r > max_radius) break;
        try {
            Invariant3 inv = detail::invariant_at(ac, gens, d->cls, r);
            Invariant3 check = detail::invariant_at(ac, gens, d->cls, 2 * r);
            if (check == inv) return inv;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::RegionTooSmall) throw;
        }
    }
    fail(ErrorKind::RegionTooSmall, "fundamental domain not confirmed within radius " + std::to_string(max_radius));
}

enum class Status3 { Conjugate, NotConjugate, Inconclusive };

inline const char* to_string(Status3 s) {
    switch (s) {
    case Status3::Conjugate: return "conjugate";
    case Status3::NotConjugate: return "not_conjugate";
    case Status3::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Verdict3 {
    Status3 status = Status3::Inconclusive;
    std::string reason;
    std::optional<IntMatrix> witness;  // A C = C B, det C = +-1
    std::optional<SpectrumClass> cls_a, cls_b;
    std::optional<Invariant3> inv_a, inv_b;
    long search_bound = 0;
    unsigned long scanned = 0;
};

namespace detail {

/// Scans sum k_i C_i over [-bound, bound]^3 by growing max-norm shells for det +-1.
inline std::optional<IntMatrix> scan_intertwiners(const std::vector<IntMatrix>& basis, long bound, unsigned long& scanned) {
    const size_t f = basis.size();
    std::vector<std::array<long, 9>> c(f);
    for (size_t k = 0; k < f; ++k)
        for (int e = 0; e < 9; ++e) {
            const BigInt& x = basis[k](e / 3, e % 3);
            if (!x.fits_slong_p() || abs(x) > (BigInt(1) << 40)) fail(ErrorKind::Internal, "intertwiner basis entries too large");
            c[k][e] = x.get_si();
        }
    std::vector<long> k(f);
    for (long s = 1; s <= bound; ++s) {
        // odometer over [-s, s]^f, keeping only points on the shell
        std::fill(k.begin(), k.end(), -s);
        while (true) {
            long mx = 0;
            for (long x : k) mx = std::max(mx, std::labs(x));
            if (mx == s) {
                ++scanned;
                __int128 m[9] = {};
                for (size_t i = 0; i < f; ++i)
                    for (int e = 0; e < 9; ++e) m[e] += static_cast<__int128>(k[i]) * c[i][e];
                __int128 d = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6]);
                if (d == 1 || d == -1) {
                    IntMatrix out(3, 3);
                    for (size_t i = 0; i < f; ++i) out = out + BigInt(k[i]) * basis[i];
                    return out;
                }
            }
            size_t i = f;
            while (i > 0) {
                --i;
                if (k[i] < s) {
                    ++k[i];
                    break;
                }
                k[i] = -s;
                if (i == 0) {
                    i = f + 1;
                    break;
                }
            }
            if (i == f + 1 || f == 0) break;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Three-stage decision: rational similarity, sail invariants, then a bounded
/// witness search. "conjugate" always carries an exactly verified witness.
inline Verdict3 decide_conjugacy3(const IntMatrix& a, const IntMatrix& b, long search_bound, long max_radius = 192) {
    if (search_bound < 1) fail(ErrorKind::Domain, "search bound must be positive");
    Verdict3 v;
    v.search_bound = search_bound;
    v.cls_a = classify_spectrum(a);
    v.cls_b = classify_spectrum(b);
    if (*v.cls_a != *v.cls_b) {
        v.status = Status3::NotConjugate;
        v.reason = "spectrum class mismatch";
        return v;
    }
    if (!similar_over_Q(a, b)) {
        v.status = Status3::NotConjugate;
        v.reason = "not similar over Q";
        return v;
    }
    v.inv_a = invariant3(a, max_radius);
    v.inv_b = invariant3(b, max_radius);
    if (!(*v.inv_a == *v.inv_b)) {
        v.status = Status3::NotConjugate;
        v.reason = "sail invariants differ";
        return v;
    }
    auto basis = integer_intertwiners(a, b);
    auto c = detail::scan_intertwiners(basis, search_bound, v.scanned);
    if (c) {
        if (!verify_witness(a, b, *c)) fail(ErrorKind::Internal, "witness failed verification");
        v.status = Status3::Conjugate;
        v.reason = "witness found";
        v.witness = c;
    } else {
        v.status = Status3::Inconclusive;
        v.reason = "invariants agree but no witness within the search bound";
    }
    return v;
}

} // namespace sailkit
