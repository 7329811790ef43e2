#pragma once

#include <cmath>
#include <compare>
#include <ostream>
#include <sstream>
#include <string>

#include "sailkit/bigint.hpp"

namespace sailkit {

/// Exact real number (p + q*sqrt(D)) / r in canonical form.
///
/// Canonical form: r > 0, gcd(p, q, r) = 1, D square-free. Rational values
/// carry q = 0 and D = 1, so structural equality is numeric equality.
class QuadraticSurd {
public:
    QuadraticSurd() : p_(0), q_(0), r_(1), d_(1) {}
    QuadraticSurd(long v) : p_(v), q_(0), r_(1), d_(1) {} // NOLINT(implicit)
    QuadraticSurd(const BigInt& v) : p_(v), q_(0), r_(1), d_(1) {} // NOLINT(implicit)
    QuadraticSurd(const BigRat& v) : p_(v.get_num()), q_(0), r_(v.get_den()), d_(1) {} // NOLINT(implicit)

    static QuadraticSurd make(BigInt p, BigInt q, BigInt r, BigInt d) {
        if (r == 0) fail(ErrorKind::InvalidDenominator, "surd with zero denominator");
        if (sgn(d) < 0) fail(ErrorKind::Domain, "surd radicand must be non-negative");
        QuadraticSurd s;
        if (q == 0 || d == 0) {
            q = 0;
            d = 1;
        } else {
            auto [core, f] = squarefree_split(d);
            q *= f;
            d = core;
            if (d == 1) {
                p += q;
                q = 0;
            }
        }
        if (sgn(r) < 0) {
            p = -p;
            q = -q;
            r = -r;
        }
        BigInt g = big_gcd(big_gcd(p, q), r);
        if (g > 1) {
            p /= g;
            q /= g;
            r /= g;
        }
        s.p_ = std::move(p);
        s.q_ = std::move(q);
        s.r_ = std::move(r);
        s.d_ = std::move(d);
        return s;
    }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& r() const { return r_; }
    const BigInt& radicand() const { return d_; }

    bool is_rational() const { return q_ == 0; }
    BigRat to_rational() const {
        if (!is_rational()) fail(ErrorKind::Domain, "surd is irrational");
        return make_rat(p_, r_);
    }

    /// Sign of the value, decided exactly.
    int sign() const {
        int sp = sgn(p_), sq = sgn(q_);
        if (sq == 0) return sp;
        if (sp == 0 || sp == sq) return sq;
        // opposite signs: compare p^2 with q^2 D
        BigInt lhs = p_ * p_, rhs = q_ * q_ * d_;
        int c = cmp(lhs, rhs);
        return c > 0 ? sp : (c < 0 ? sq : 0);
    }

    /// Exact floor, using integer square roots only.
    BigInt floor() const {
        if (q_ == 0) return floor_div(p_, r_);
        BigInt n = q_ * q_ * d_;
        BigInt s = isqrt(n);
        if (sgn(q_) > 0) return floor_div(p_ + s, r_);
        return floor_div(p_ - s - 1, r_);
    }

    BigInt ceil() const { return -(-*this).floor(); }

    QuadraticSurd conjugate() const {
        QuadraticSurd c = *this;
        c.q_ = -c.q_;
        return c;
    }

    double to_double() const {
        return (p_.get_d() + q_.get_d() * std::sqrt(d_.get_d())) / r_.get_d();
    }

    QuadraticSurd operator-() const {
        QuadraticSurd c = *this;
        c.p_ = -c.p_;
        c.q_ = -c.q_;
        return c;
    }

    friend QuadraticSurd operator+(const QuadraticSurd& a, const QuadraticSurd& b) {
        BigInt d = common_radicand(a, b);
        return make(a.p_ * b.r_ + b.p_ * a.r_, a.q_ * b.r_ + b.q_ * a.r_, a.r_ * b.r_, d);
    }
    friend QuadraticSurd operator-(const QuadraticSurd& a, const QuadraticSurd& b) { return a + (-b); }
    friend QuadraticSurd operator*(const QuadraticSurd& a, const QuadraticSurd& b) {
        BigInt d = common_radicand(a, b);
        return make(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_, a.r_ * b.r_, d);
    }
    QuadraticSurd inverse() const {
        // r / (p + q sqrt D) = r (p - q sqrt D) / (p^2 - q^2 D)
        BigInt den = p_ * p_ - q_ * q_ * d_;
        if (den == 0) fail(ErrorKind::DivisionByZero, "inverse of zero surd");
        return make(r_ * p_, -r_ * q_, den, d_);
    }
    friend QuadraticSurd operator/(const QuadraticSurd& a, const QuadraticSurd& b) {
        if (b.sign() == 0) fail(ErrorKind::DivisionByZero, "surd division by zero");
        return a * b.inverse();
    }

    friend bool operator==(const QuadraticSurd& a, const QuadraticSurd& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_ && a.d_ == b.d_;
    }
    friend std::strong_ordering operator<=>(const QuadraticSurd& a, const QuadraticSurd& b) {
        int s = (a - b).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadraticSurd& s) {
        if (s.q_ == 0) {
            os << s.p_;
        } else {
            os << "(" << s.p_ << (sgn(s.q_) < 0 ? "-" : "+");
            BigInt aq = abs(s.q_);
            if (aq != 1) os << aq << "*";
            os << "sqrt(" << s.d_ << "))";
        }
        if (s.r_ != 1) os << "/" << s.r_;
        return os;
    }

    /// Structural key usable in ordered containers (not numeric order).
    friend bool structural_less(const QuadraticSurd& a, const QuadraticSurd& b) {
        if (a.d_ != b.d_) return a.d_ < b.d_;
        if (a.r_ != b.r_) return a.r_ < b.r_;
        if (a.q_ != b.q_) return a.q_ < b.q_;
        return a.p_ < b.p_;
    }

private:
    static BigInt common_radicand(const QuadraticSurd& a, const QuadraticSurd& b) {
        if (a.q_ == 0) return b.d_;
        if (b.q_ == 0) return a.d_;
        if (a.d_ != b.d_) fail(ErrorKind::Domain, "surds from different quadratic fields");
        return a.d_;
    }

    BigInt p_, q_, r_, d_;
};

struct SurdStructuralLess {
    bool operator()(const QuadraticSurd& a, const QuadraticSurd& b) const { return structural_less(a, b); }
};

inline QuadraticSurd surd_canonicalize(const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& d) {
    if (sgn(d) < 1) fail(ErrorKind::Domain, "radicand must be >= 1");
    return QuadraticSurd::make(p, q, r, d);
}

inline BigInt surd_floor(const QuadraticSurd& x) { return x.floor(); }

/// The continued-fraction step x -> 1 / (x - a).
inline QuadraticSurd surd_reciprocal_minus(const QuadraticSurd& x, const BigInt& a) {
    QuadraticSurd diff = x - QuadraticSurd(a);
    if (diff.sign() == 0) fail(ErrorKind::DivisionByZero, "continued-fraction step at an exact integer");
    return diff.inverse();
}

} // namespace sailkit
