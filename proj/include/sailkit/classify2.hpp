#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>

#include "sailkit/cf.hpp"
#include "sailkit/linalg.hpp"

namespace sailkit {

enum class Group { GL, SL };

inline const char* to_string(Group g) { return g == Group::GL ? "GL" : "SL"; }

enum class Reason { CharpolyMismatch, PeriodMismatch, ParityObstruction, WitnessFound };

inline const char* to_string(Reason r) {
    switch (r) {
        case Reason::CharpolyMismatch: return "charpoly_mismatch";
        case Reason::PeriodMismatch: return "period_mismatch";
        case Reason::ParityObstruction: return "parity_obstruction";
        case Reason::WitnessFound: return "witness_found";
    }
    return "?";
}

struct Verdict2 {
    bool conjugate = false;
    Group group = Group::GL;
    std::optional<IntMatrix> witness;
    Reason reason = Reason::CharpolyMismatch;
    PeriodWord period_a, period_b;  // filled once the charpoly check passes
    size_t q = 0;                   // period length, for the parity case
};

namespace detail {

struct SlopeData {
    CFExpansion cf;
    QuadraticSurd omega;
};

inline SlopeData slope_data(const IntMatrix& m) {
    QuadraticSurd w = slope_of_expanding_eigenvector(m);
    return {cf_expand(w), w};
}

/// Integer matrix acting on column vectors as the Moebius map x -> omega_B
/// composed with omega_A -> x, built from matching tails of the two expansions.
inline std::optional<IntMatrix> tail_matching_map(const SlopeData& a, const SlopeData& b) {
    const auto& wa = a.cf.period;
    const auto& wb = b.cf.period;
    if (wa.size() != wb.size()) return std::nullopt;
    for (size_t j = 0; j < wb.size(); ++j) {
        std::vector<BigInt> rot(wb.begin() + j, wb.end());
        rot.insert(rot.end(), wb.begin(), wb.begin() + j);
        if (rot != wa) continue;
        // omega_A = M_A . x, omega_B = M_B . P_j . x for the same purely periodic x
        std::vector<BigInt> head(wb.begin(), wb.begin() + j);
        return word_matrix(b.cf.preperiod) * word_matrix(head) * unimodular_inverse(word_matrix(a.cf.preperiod));
    }
    return std::nullopt;
}

/// Integer matrix fixing omega_B with determinant (-1)^q; it commutes with B.
inline IntMatrix slope_stabiliser(const SlopeData& b) {
    IntMatrix m = word_matrix(b.cf.preperiod);
    return m * word_matrix(b.cf.period) * unimodular_inverse(m);
}

inline void require_pair(const IntMatrix& a, const IntMatrix& b) {
    require_hyperbolic_irreducible_2x2(a, "A");
    require_hyperbolic_irreducible_2x2(b, "B");
}

} // namespace detail

/// C with A C = C B and det C = +-1, from the matched periods of omega_A and omega_B.
/// The columns of the convergent matrices involved are sail vertices, so this
/// maps a vertex pair of the sail of A onto the corresponding pair for B.
inline IntMatrix witness_from_periods(const IntMatrix& a, const IntMatrix& b) {
    detail::require_pair(a, b);
    auto da = detail::slope_data(a), db = detail::slope_data(b);
    auto u = detail::tail_matching_map(da, db);
    if (!u) fail(ErrorKind::Domain, "periods of omega_A and omega_B differ");
    if (mobius(*u, da.omega) != db.omega) fail(ErrorKind::Internal, "tail matching map misses omega_B");
    IntMatrix c = unimodular_inverse(*u);
    if (!verify_witness(a, b, c)) fail(ErrorKind::Internal, "constructed witness fails A C = C B");
    return c;
}

inline Verdict2 decide_gl2(const IntMatrix& a, const IntMatrix& b) {
    detail::require_pair(a, b);
    Verdict2 v;
    v.group = Group::GL;
    if (!similar_over_Q(a, b)) {
        v.reason = Reason::CharpolyMismatch;
        return v;
    }
    auto da = detail::slope_data(a), db = detail::slope_data(b);
    v.period_a = period_of(da.cf);
    v.period_b = period_of(db.cf);
    v.q = v.period_a.size();
    if (!period_cyclic_equal(v.period_a, v.period_b)) {
        v.reason = Reason::PeriodMismatch;
        return v;
    }
    v.witness = witness_from_periods(a, b);
    v.conjugate = true;
    v.reason = Reason::WitnessFound;
    return v;
}

/// Refines a GL verdict: odd q always admits a det +1 witness (the slope
/// stabiliser has det -1); for even q every commuting unit has det +1, so the
/// determinant of any witness decides.
inline Verdict2 decide_sl2(const IntMatrix& a, const IntMatrix& b) {
    Verdict2 v = decide_gl2(a, b);
    v.group = Group::SL;
    if (!v.conjugate) return v;
    IntMatrix c = *v.witness;
    if (det(c) == 1) return v;
    auto db = detail::slope_data(b);
    IntMatrix s = detail::slope_stabiliser(db);
    if (!commutes(s, b)) fail(ErrorKind::Internal, "slope stabiliser does not commute with B");
    if (v.q % 2 == 1) {
        IntMatrix c2 = c * s;
        if (!verify_witness(a, b, c2, true)) fail(ErrorKind::Internal, "odd-period SL witness fails verification");
        v.witness = c2;
        return v;
    }
    // even q: scan the coset c * (+-S^k) anyway so the verdict does not hinge on which c was found
    IntMatrix si = unimodular_inverse(s);
    IntMatrix pw = mat_pow(si, 2);
    for (int k = -2; k <= 2; ++k, pw = pw * s) {
        for (int sign : {1, -1}) {
            IntMatrix c2 = c * (sign == 1 ? pw : -pw);
            if (verify_witness(a, b, c2, true)) {
                v.witness = c2;
                return v;
            }
        }
    }
    v.conjugate = false;
    v.witness.reset();
    v.reason = Reason::ParityObstruction;
    return v;
}

inline Verdict2 decide2(const IntMatrix& a, const IntMatrix& b, Group g) {
    return g == Group::GL ? decide_gl2(a, b) : decide_sl2(a, b);
}

struct OracleResult {
    std::optional<IntMatrix> witness;
    std::uint64_t scanned = 0;  // candidate matrices examined
    int free_entries = 0;       // dimension of the rational solution space
};

/// Exhaustive search for C with entries in [-bound, bound], A C = C B and
/// det C = +-1 (or +1 when det_plus_one). Works in any dimension: the entries of
/// C at the free columns of the reduced Sylvester system are scanned over the
/// box and the others are solved for exactly. Among all hits the one with the
/// smallest max-norm wins, then the smallest entry sum of absolute values, then
/// row-major order with values ranked 0, 1, -1, 2, -2, ...
inline OracleResult brute_force_conjugator(const IntMatrix& a, const IntMatrix& b, long bound, bool det_plus_one = false) {
    if (a.n() != b.n()) fail(ErrorKind::Domain, "dimension mismatch");
    const int n = a.n(), nn = n * n;
    OracleResult out;
    auto sol = solve_sylvester_rational(a, b);
    out.free_entries = static_cast<int>(sol.size());
    if (sol.empty()) return out;
    // free column of each basis vector: the one entry equal to 1 with the others 0 there
    std::vector<int> free_col;
    for (const auto& m : sol) {
        for (int e = 0; e < nn; ++e) {
            const BigRat& x = m(e / n, e % n);
            if (x != 1) continue;
            bool unique = true;
            for (const auto& other : sol)
                if (&other != &m && other(e / n, e % n) != 0) unique = false;
            if (unique) {
                free_col.push_back(e);
                break;
            }
        }
    }
    if (free_col.size() != sol.size()) fail(ErrorKind::Internal, "unexpected null space layout");
    const size_t f = sol.size();
    // entry e of C is (sum_k x_k num[k][e]) / den[e]
    std::vector<std::vector<__int128>> num(f, std::vector<__int128>(nn));
    std::vector<__int128> den(nn);
    for (int e = 0; e < nn; ++e) {
        BigInt l = 1;
        for (size_t k = 0; k < f; ++k) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), sol[k](e / n, e % n).get_den_mpz_t());
        if (!fits_int64(l)) fail(ErrorKind::Internal, "oracle denominators too large");
        den[e] = to_int64(l);
        for (size_t k = 0; k < f; ++k) {
            BigRat scaled = sol[k](e / n, e % n) * l;
            if (!fits_int64(scaled.get_num())) fail(ErrorKind::Internal, "oracle coefficients too large");
            num[k][e] = to_int64(scaled.get_num());
        }
    }
    std::vector<long> x(f, -bound), entries(nn), best_entries;  // entries hold the scan rank of each value
    std::optional<IntMatrix> best;
    long best_norm = 0, best_l1 = 0;
    while (true) {
        ++out.scanned;
        bool ok = true;
        long norm = 0, l1 = 0;
        for (int e = 0; e < nn && ok; ++e) {
            __int128 v = 0;
            for (size_t k = 0; k < f; ++k) v += num[k][e] * x[k];
            if (v % den[e] != 0) ok = false;
            else {
                v /= den[e];
                if (v > bound || v < -bound) ok = false;
                else {
                    long iv = static_cast<long>(v);
                    entries[e] = iv > 0 ? 2 * iv - 1 : -2 * iv;
                    norm = std::max(norm, std::abs(iv));
                    l1 += std::abs(iv);
                }
            }
        }
        if (ok && (!best || std::tie(norm, l1, entries) < std::tie(best_norm, best_l1, best_entries))) {
            IntMatrix ci(n, n);
            for (int e = 0; e < nn; ++e) ci(e / n, e % n) = entries[e] % 2 ? (entries[e] + 1) / 2 : -entries[e] / 2;
            if (verify_witness(a, b, ci, det_plus_one)) {
                best = ci;
                best_norm = norm;
                best_l1 = l1;
                best_entries = entries;
            }
        }
        size_t k = 0;
        while (k < f && x[k] == bound) x[k++] = -bound;
        if (k == f) break;
        ++x[k];
    }
    out.witness = best;
    return out;
}

} // namespace sailkit
