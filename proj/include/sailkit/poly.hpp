#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sailkit/bigint.hpp"

namespace sailkit {

/// Dense univariate polynomial, coefficients stored lowest degree first.
/// The zero polynomial has an empty coefficient list and degree -1.
template <typename T>
class Poly {
public:
    Poly() = default;
    Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); } // NOLINT(implicit)
    Poly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
    static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[i] : T(0); }
    const T& leading() const { return c_.back(); }

    template <typename U>
    U eval(const U& x) const {
        U acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(*it);
        return acc;
    }

    Poly derivative() const {
        std::vector<T> d;
        for (int i = 1; i <= degree(); ++i) d.push_back(c_[i] * T(i));
        return Poly(std::move(d));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const T& s, const Poly& a) {
        Poly r = a;
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) {
        if (p.is_zero()) return os << "0";
        bool first = true;
        for (int i = p.degree(); i >= 0; --i) {
            T v = p.c_[i];
            if (v == 0) continue;
            bool neg = v < 0;
            if (neg) v = -v;
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            if (v != 1 || i == 0) {
                os << v;
                if (i > 0) os << "*";
            }
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<T> c_;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<BigRat>;

inline RatPoly to_rat(const IntPoly& p) {
    std::vector<BigRat> c;
    for (const auto& v : p.coeffs()) c.emplace_back(v);
    return RatPoly(std::move(c));
}

/// Clears denominators and content; the result has positive leading coefficient.
inline IntPoly primitive_part(const RatPoly& p) {
    if (p.is_zero()) return IntPoly();
    BigInt l = 1;
    for (const auto& v : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<BigInt> c;
    BigInt g = 0;
    for (const auto& v : p.coeffs()) {
        BigRat s = v * l;
        c.push_back(s.get_num());
        g = big_gcd(g, s.get_num());
    }
    if (sgn(c.back()) < 0) g = -g;
    for (auto& v : c) v /= g;
    return IntPoly(std::move(c));
}

inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
    std::vector<BigRat> rem = a.coeffs();
    int db = b.degree();
    int dq = a.degree() - db;
    if (dq < 0) return {RatPoly(), a};
    std::vector<BigRat> q(dq + 1, BigRat(0));
    for (int i = dq; i >= 0; --i) {
        BigRat f = rem[i + db] / b.leading();
        q[i] = f;
        for (int j = 0; j <= db; ++j) rem[i + j] -= f * b.coeff(j);
    }
    rem.resize(db);
    return {RatPoly(std::move(q)), RatPoly(std::move(rem))};
}

inline RatPoly monic(const RatPoly& p) {
    if (p.is_zero()) return p;
    return BigRat(1) / p.leading() * p;
}

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline RatPoly poly_mod(const RatPoly& a, const RatPoly& m) { return divmod(a, m).second; }

inline bool is_squarefree(const IntPoly& p) {
    if (p.degree() <= 0) return true;
    RatPoly rp = to_rat(p);
    return poly_gcd(rp, rp.derivative()).degree() == 0;
}

/// Rational roots of an integer polynomial (rational root theorem).
inline std::vector<BigRat> rational_roots(const IntPoly& p) {
    std::vector<BigRat> out;
    if (p.degree() <= 0) return out;
    // Strip x^k factors first so the constant term is nonzero.
    int shift = 0;
    while (p.coeff(shift) == 0) ++shift;
    if (shift > 0) out.emplace_back(0);
    BigInt c0 = abs(p.coeff(shift)), cn = abs(p.leading());
    auto divisors = [](const BigInt& n) {
        std::vector<BigInt> d;
        for (BigInt i = 1; i * i <= n; ++i) {
            if (n % i == 0) {
                d.push_back(i);
                if (i * i != n) d.push_back(n / i);
            }
        }
        return d;
    };
    for (const auto& a : divisors(c0)) {
        for (const auto& b : divisors(cn)) {
            for (int s : {1, -1}) {
                BigRat cand = make_rat(BigInt(s) * a, b);
                if (p.eval(cand) == 0 &&
                    std::find(out.begin(), out.end(), cand) == out.end())
                    out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline BigInt discriminant_quadratic(const IntPoly& p) {
    return p.coeff(1) * p.coeff(1) - 4 * p.coeff(2) * p.coeff(0);
}

} // namespace sailkit
