#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "sailkit/hull3.hpp"
#include "sailkit/intmat.hpp"
#include "sailkit/numfield.hpp"

namespace sailkit {

enum class SpectrumClass { Klein, KleinVoronoi };

inline const char* to_string(SpectrumClass c) { return c == SpectrumClass::Klein ? "klein" : "klein_voronoi"; }

/// Checks the 3x3 preconditions and counts real eigenvalues.
inline SpectrumClass classify_spectrum(const IntMatrix& a) {
    if (a.rows() != 3 || a.cols() != 3) fail(ErrorKind::Domain, "classify_spectrum: matrix must be 3x3");
    if (det(a) != 1) fail(ErrorKind::Domain, "classify_spectrum: determinant must be +1");
    IntPoly p = charpoly(a);
    if (!is_irreducible_over_Q(p)) fail(ErrorKind::Domain, "classify_spectrum: characteristic polynomial is reducible");
    if (!is_hyperbolic(a)) fail(ErrorKind::Domain, "classify_spectrum: matrix is not hyperbolic");
    size_t real = SturmChain(p).count_all();
    return real == 3 ? SpectrumClass::Klein : SpectrumClass::KleinVoronoi;
}

/// Eigen-structure of a 3x3 matrix with irreducible characteristic polynomial.
/// W and E are polynomial row/column eigenvectors: W(mu) A = mu W(mu) and
/// A E(mu) = mu E(mu) for every root mu.
struct CubicData {
    IntMatrix a;
    IntPoly charpoly;
    SpectrumClass cls = SpectrumClass::Klein;
    std::vector<RealRootField> fields;  // real roots, ascending
    std::vector<IntPoly> W, E;
    std::vector<std::array<double, 3>> w_approx, e_approx;  // per real root
    std::complex<long double> c;                             // complex root with Im > 0 (KV only)
    std::array<std::complex<long double>, 3> wc{}, ec{};     // W(c), E(c)
};

inline std::complex<long double> eval_complex(const IntPoly& p, std::complex<long double> x) {
    std::complex<long double> acc = 0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + static_cast<long double>(it->get_d());
    return acc;
}

inline std::shared_ptr<const CubicData> cubic_data(const IntMatrix& a) {
    auto d = std::make_shared<CubicData>();
    d->a = a;
    d->cls = classify_spectrum(a);
    EigenData ed = eigen_data(a);
    d->charpoly = ed.charpoly;
    // irreducibility: one adjugate row/column is nonzero at every root
    d->W = ed.left_eigenvectors[0];
    d->E = ed.eigenvectors[0];
    for (auto& box : ed.real_roots) {
        RealRootField f(d->charpoly, box);
        std::array<double, 3> w{}, e{};
        for (int j = 0; j < 3; ++j) {
            w[j] = f.approx(to_rat(d->W[j]));
            e[j] = f.approx(to_rat(d->E[j]));
        }
        d->w_approx.push_back(w);
        d->e_approx.push_back(e);
        d->fields.push_back(std::move(f));
    }
    if (d->cls == SpectrumClass::KleinVoronoi) {
        // deflate by the real root: x^2 + (l + c2) x + (l^2 + c2 l + c1)
        long double l = d->fields[0].approx_root();
        long double c2 = d->charpoly.coeff(2).get_d(), c1 = d->charpoly.coeff(1).get_d();
        long double b = l + c2, q = l * l + c2 * l + c1;
        long double disc = b * b - 4 * q;
        d->c = {-b / 2, std::sqrt(-disc) / 2};
        for (int j = 0; j < 3; ++j) {
            d->wc[j] = eval_complex(d->W[j], d->c);
            d->ec[j] = eval_complex(d->E[j], d->c);
        }
    }
    return d;
}

struct DirichletGens {
    std::vector<IntMatrix> gens;
    std::vector<std::array<long, 3>> coeffs;  // g = a I + b A + c A^2
    std::vector<std::vector<double>> logs;    // log of the eigenvalue at each real root
    int shell = 0;                            // coefficient shell where the search stopped
};

namespace detail {

inline IntMatrix poly_in(const IntMatrix& a, const IntMatrix& a2, const std::array<long, 3>& k) {
    return BigInt(k[0]) * IntMatrix::identity(3) + BigInt(k[1]) * a + BigInt(k[2]) * a2;
}

inline std::vector<double> unit_logs(const CubicData& d, const std::array<long, 3>& k) {
    std::vector<double> out;
    for (const auto& f : d.fields) {
        double x = f.approx_root();
        out.push_back(std::log(std::fabs(k[0] + k[1] * x + k[2] * x * x)));
    }
    return out;
}

inline double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace detail

/// Rank of the group of commuting det +1 operators with positive real eigenvalues:
/// 2 when all eigenvalues are real, 1 otherwise.
inline int dirichlet_rank(SpectrumClass c) { return c == SpectrumClass::Klein ? 2 : 1; }

/// Searches a I + b A + c A^2 in shells of max(|a|,|b|,|c|) for det +1 elements with
/// positive real eigenvalues. All hits up to one shell past the first full-rank shell
/// are pooled; the shortest hit in log space is taken first, then the shortest hit
/// independent of it, and the pair is Gauss-reduced.
inline DirichletGens dirichlet_generators(const IntMatrix& a, int max_shell = 12) {
    auto d = cubic_data(a);
    const int rank = dirichlet_rank(d->cls);
    IntMatrix a2 = a * a;
    struct Hit {
        std::array<long, 3> k;
        std::vector<double> logs;
        int shell;
    };
    std::vector<Hit> hits;
    int full_at = -1;
    DirichletGens out;
    for (int s = 1; s <= max_shell; ++s) {
        for (long x = -s; x <= s; ++x)
            for (long y = -s; y <= s; ++y)
                for (long z = -s; z <= s; ++z) {
                    if (std::max({std::labs(x), std::labs(y), std::labs(z)}) != s) continue;
                    std::array<long, 3> k{x, y, z};
                    if (x == 1 && y == 0 && z == 0) continue;
                    IntMatrix g = detail::poly_in(a, a2, k);
                    if (det(g) != 1) continue;
                    RatPoly gp = RatPoly(std::vector<BigRat>{BigRat(x), BigRat(y), BigRat(z)});
                    bool positive = true;
                    for (const auto& f : d->fields)
                        if (f.sign(gp) <= 0) positive = false;
                    if (!positive) continue;
                    hits.push_back({k, detail::unit_logs(*d, k), s});
                }
        if (full_at < 0) {
            // rank check over the pooled hits
            bool full = false;
            if (rank == 1) full = !hits.empty();
            else
                for (size_t i = 0; i < hits.size() && !full; ++i)
                    for (size_t j = i + 1; j < hits.size() && !full; ++j) {
                        const auto& u = hits[i].logs;
                        const auto& v = hits[j].logs;
                        double cx = u[1] * v[2] - u[2] * v[1], cy = u[2] * v[0] - u[0] * v[2], cz = u[0] * v[1] - u[1] * v[0];
                        if (std::sqrt(cx * cx + cy * cy + cz * cz) > 1e-6 * detail::norm2(u) * detail::norm2(v)) full = true;
                    }
            if (full) full_at = s;
        }
        if (full_at >= 0 && s >= full_at + 1) {
            out.shell = s;
            break;
        }
        out.shell = s;
    }
    if (full_at < 0) fail(ErrorKind::BoundExhausted, "no Dirichlet generators within coefficient shell " + std::to_string(max_shell));
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& p, const Hit& q) {
        return detail::norm2(p.logs) < detail::norm2(q.logs) - 1e-9;
    });
    auto push = [&](const Hit& h) {
        out.coeffs.push_back(h.k);
        out.gens.push_back(detail::poly_in(a, a2, h.k));
        out.logs.push_back(h.logs);
    };
    push(hits[0]);
    if (rank == 2) {
        for (size_t j = 1; j < hits.size(); ++j) {
            const auto& u = hits[0].logs;
            const auto& v = hits[j].logs;
            double cx = u[1] * v[2] - u[2] * v[1], cy = u[2] * v[0] - u[0] * v[2], cz = u[0] * v[1] - u[1] * v[0];
            if (std::sqrt(cx * cx + cy * cy + cz * cz) > 1e-6 * detail::norm2(u) * detail::norm2(v)) {
                push(hits[j]);
                break;
            }
        }
        // Gauss reduction of the pair in log space, tracked on the integer matrices
        auto dotl = [](const std::vector<double>& p, const std::vector<double>& q) {
            double s = 0;
            for (size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
            return s;
        };
        for (int iter = 0; iter < 64; ++iter) {
            if (dotl(out.logs[1], out.logs[1]) < dotl(out.logs[0], out.logs[0]) - 1e-9) {
                std::swap(out.logs[0], out.logs[1]);
                std::swap(out.gens[0], out.gens[1]);
                std::swap(out.coeffs[0], out.coeffs[1]);
            }
            long m = std::lround(dotl(out.logs[1], out.logs[0]) / dotl(out.logs[0], out.logs[0]));
            if (m == 0) break;
            IntMatrix step = m > 0 ? mat_pow(unimodular_inverse(out.gens[0]), m) : mat_pow(out.gens[0], -m);
            out.gens[1] = out.gens[1] * step;
            for (size_t i = 0; i < out.logs[1].size(); ++i) out.logs[1][i] -= m * out.logs[0][i];
            out.coeffs[1] = {0, 0, 0};  // no longer a small polynomial; coefficients not tracked
        }
    }
    return out;
}

} // namespace sailkit
