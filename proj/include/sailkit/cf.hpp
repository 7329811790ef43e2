#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sailkit/intmat.hpp"
#include "sailkit/surd.hpp"

namespace sailkit {

/// Eventually periodic continued fraction [preperiod; (period)].
/// The digit sequence is preperiod followed by the period repeated forever;
/// a purely periodic expansion has an empty preperiod and a_0 = period[0].
struct CFExpansion {
    std::vector<BigInt> preperiod;
    std::vector<BigInt> period;

    size_t q() const { return period.size(); }
    size_t k() const { return preperiod.size(); }

    const BigInt& digit(size_t i) const {
        if (i < preperiod.size()) return preperiod[i];
        return period[(i - preperiod.size()) % period.size()];
    }

    friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

/// Positive-integer word up to cyclic rotation; stores the least rotation.
class PeriodWord {
public:
    PeriodWord() = default;
    explicit PeriodWord(std::vector<BigInt> w) : word_(least_rotation(std::move(w))) {}

    const std::vector<BigInt>& word() const { return word_; }
    size_t size() const { return word_.size(); }

    friend bool operator==(const PeriodWord&, const PeriodWord&) = default;

    std::string str() const {
        std::string out = "(";
        for (size_t i = 0; i < word_.size(); ++i) out += (i ? "," : "") + word_[i].get_str();
        return out + ")";
    }
    friend std::ostream& operator<<(std::ostream& os, const PeriodWord& w) { return os << w.str(); }

    static std::vector<BigInt> least_rotation(std::vector<BigInt> w) {
        if (w.empty()) return w;
        std::vector<BigInt> best = w;
        for (size_t s = 1; s < w.size(); ++s) {
            std::rotate(w.begin(), w.begin() + 1, w.end());
            if (w < best) best = w;
        }
        return best;
    }

private:
    std::vector<BigInt> word_;
};

/// Shortest word u with w = u^k.
inline std::vector<BigInt> primitive_root(const std::vector<BigInt>& w) {
    const size_t n = w.size();
    for (size_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return std::vector<BigInt>(w.begin(), w.begin() + d);
    }
    return w;
}

inline CFExpansion cf_expand(const QuadraticSurd& x0, size_t max_steps = 1000000) {
    if (x0.is_rational()) fail(ErrorKind::RationalInput, "rational input has a finite continued fraction");
    std::map<QuadraticSurd, size_t, SurdStructuralLess> seen;
    std::vector<BigInt> digits;
    QuadraticSurd x = x0;
    for (size_t i = 0; i < max_steps; ++i) {
        auto [it, fresh] = seen.emplace(x, i);
        if (!fresh) {
            size_t start = it->second;
            CFExpansion e;
            e.preperiod.assign(digits.begin(), digits.begin() + start);
            e.period.assign(digits.begin() + start, digits.end());
            // canonical boundary: pull trailing preperiod digits into the period
            while (!e.preperiod.empty() && e.preperiod.back() == e.period.back()) {
                std::rotate(e.period.rbegin(), e.period.rbegin() + 1, e.period.rend());
                e.preperiod.pop_back();
            }
            e.period = primitive_root(e.period);
            return e;
        }
        BigInt a = x.floor();
        digits.push_back(a);
        x = surd_reciprocal_minus(x, a);
    }
    fail(ErrorKind::Internal, "continued fraction period not detected within step limit");
}

inline PeriodWord period_of(const CFExpansion& e) { return PeriodWord(primitive_root(e.period)); }

inline bool period_cyclic_equal(const PeriodWord& a, const PeriodWord& b) { return a == b; }

/// Moebius action of a 2x2 integer matrix: (a x + b) / (c x + d).
inline QuadraticSurd mobius(const IntMatrix& m, const QuadraticSurd& x) {
    return (QuadraticSurd(m(0, 0)) * x + QuadraticSurd(m(0, 1))) /
           (QuadraticSurd(m(1, 0)) * x + QuadraticSurd(m(1, 1)));
}

/// Checks the preconditions shared by the 2x2 entry points.
inline void require_hyperbolic_irreducible_2x2(const IntMatrix& a, const char* who) {
    if (a.rows() != 2 || a.cols() != 2) fail(ErrorKind::Domain, std::string(who) + ": matrix must be 2x2");
    if (abs(det(a)) != 1) fail(ErrorKind::Domain, std::string(who) + ": matrix is not unimodular");
    if (!is_hyperbolic(a)) fail(ErrorKind::Domain, std::string(who) + ": matrix is not hyperbolic");
    if (!is_irreducible_over_Q(charpoly(a)))
        fail(ErrorKind::Domain, std::string(who) + ": characteristic polynomial is reducible");
}

/// Expanding eigenvalue (t + s sqrt(t^2 - 4 det)) / 2 with s = sign(t).
inline QuadraticSurd expanding_eigenvalue(const IntMatrix& a) {
    BigInt t = a.trace(), d = det(a);
    return QuadraticSurd::make(t, sgn(t) >= 0 ? 1 : -1, 2, t * t - 4 * d);
}

/// Slope x / y of the eigenvector (x, y) for the eigenvalue of modulus > 1.
inline QuadraticSurd slope_of_expanding_eigenvector(const IntMatrix& a) {
    require_hyperbolic_irreducible_2x2(a, "slope_of_expanding_eigenvector");
    // (a00 - l) x + a01 y = 0, a01 != 0 for an irreducible characteristic polynomial
    QuadraticSurd lambda = expanding_eigenvalue(a);
    return QuadraticSurd(a(0, 1)) / (lambda - QuadraticSurd(a(0, 0)));
}

inline IntMatrix digit_matrix(const BigInt& d) {
    IntMatrix m(2, 2);
    m(0, 0) = d;
    m(0, 1) = 1;
    m(1, 0) = 1;
    return m;
}

/// Products [[a0,1],[1,0]] ... [[ai,1],[1,0]] for i = 0 .. m-1.
inline std::vector<IntMatrix> convergent_matrices(const CFExpansion& e, size_t m) {
    if (m < 1) fail(ErrorKind::Domain, "convergent_matrices needs m >= 1");
    std::vector<IntMatrix> out;
    IntMatrix acc = IntMatrix::identity(2);
    for (size_t i = 0; i < m; ++i) {
        acc = acc * digit_matrix(e.digit(i));
        out.push_back(acc);
    }
    return out;
}

/// Product of the digit matrices of a word.
inline IntMatrix word_matrix(const std::vector<BigInt>& w) {
    IntMatrix acc = IntMatrix::identity(2);
    for (const auto& d : w) acc = acc * digit_matrix(d);
    return acc;
}

/// Value of the purely periodic continued fraction (w w w ...), the fixed point > 1
/// of the Moebius map of word_matrix(w). Long periods give discriminants too
/// large to factor, so callers that know the square-free radicand pass it.
inline QuadraticSurd periodic_value(const std::vector<BigInt>& w, const BigInt& radicand = 0) {
    if (w.empty()) fail(ErrorKind::Domain, "empty period");
    IntMatrix p = word_matrix(w);
    // p10 x^2 + (p11 - p00) x - p01 = 0, p10 > 0
    BigInt b = p(1, 1) - p(0, 0);
    BigInt disc = b * b + 4 * p(1, 0) * p(0, 1);
    if (radicand > 1 && disc % radicand == 0) {
        BigInt rest = disc / radicand;
        if (is_perfect_square(rest)) return QuadraticSurd::make(-b, isqrt(rest), 2 * p(1, 0), radicand);
    }
    return QuadraticSurd::make(-b, 1, 2 * p(1, 0), disc);
}

/// Exact value of an eventually periodic expansion.
inline QuadraticSurd cf_value(const CFExpansion& e, const BigInt& radicand = 0) {
    return mobius(word_matrix(e.preperiod), periodic_value(e.period, radicand));
}

} // namespace sailkit
