#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

#include "sailkit/error.hpp"

namespace sailkit {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt big_abs(const BigInt& a) { return abs(a); }

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Floor of sqrt(n) for n >= 0.
inline BigInt isqrt(const BigInt& n) {
    if (sgn(n) < 0) fail(ErrorKind::Domain, "isqrt of a negative number");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const BigInt& n) {
    return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt floor_of(const BigRat& x) { return floor_div(x.get_num(), x.get_den()); }
inline BigInt ceil_of(const BigRat& x) { return ceil_div(x.get_num(), x.get_den()); }

inline bool fits_int64(const BigInt& a) { return a.fits_slong_p(); }

inline std::int64_t to_int64(const BigInt& a) {
    if (!a.fits_slong_p()) fail(ErrorKind::Domain, "integer does not fit in 64 bits: " + a.get_str());
    return a.get_si();
}

inline BigRat make_rat(const BigInt& n, const BigInt& d) {
    if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
    BigRat r(n, d);
    r.canonicalize();
    return r;
}

/// Square-free decomposition n = s * f^2 with s square-free, by trial division.
/// Intended for the small discriminants that arise from 2x2 and 3x3 inputs.
inline std::pair<BigInt, BigInt> squarefree_split(const BigInt& n) {
    if (sgn(n) <= 0) fail(ErrorKind::Domain, "squarefree_split needs a positive integer");
    // strip primes up to the cube root; the cofactor is then 1, p, pq or p^2
    BigInt rest = n, factor = 1, core = 1;
    for (BigInt p = 2; p * p * p <= rest; ++p) {
        int e = 0;
        while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            rest /= p;
            ++e;
        }
        for (int i = 0; i + 1 < e; i += 2) factor *= p;
        if (e % 2) core *= p;
        if (p > 2) ++p;
    }
    if (rest > 1 && is_perfect_square(rest)) {
        factor *= isqrt(rest);
    } else {
        core *= rest;
    }
    return {core, factor};
}

} // namespace sailkit
