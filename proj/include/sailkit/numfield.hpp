#pragma once

#include <cmath>

#include "sailkit/roots.hpp"

namespace sailkit {

/// Exact arithmetic in Q(lambda) for one real root lambda of an irreducible
/// integer polynomial. Elements are rational polynomials of degree < deg(minpoly).
class RealRootField {
public:
    RealRootField() = default;
    RealRootField(IntPoly minpoly, RootBox root) : minpoly_(std::move(minpoly)), mod_(to_rat(minpoly_)), box_(std::move(root)) {
        box_ = root_refine(box_, BigRat(1, BigInt(1) << 64));
        BigRat mid = (box_.lo + box_.hi) / 2;
        approx_ = mid.get_d();
    }

    const IntPoly& minpoly() const { return minpoly_; }
    const RootBox& root() const { return box_; }
    double approx_root() const { return approx_; }

    RatPoly reduce(const RatPoly& h) const { return h.degree() < mod_.degree() ? h : poly_mod(h, mod_); }
    RatPoly mul(const RatPoly& a, const RatPoly& b) const { return reduce(a * b); }

    /// Sign of h(lambda). Irreducibility makes h(lambda) = 0 exactly when h reduces to 0.
    int sign(const RatPoly& h) const {
        RatPoly r = reduce(h);
        if (r.is_zero()) return 0;
        while (true) {
            int s = eval_interval(r, box_.interval()).sign();
            if (s != 0) return s;
            root_bisect(box_);
            if (box_.exact()) return sgn(r.eval(box_.lo));
        }
    }

    int compare(const RatPoly& a, const RatPoly& b) const { return sign(a - b); }

    double approx(const RatPoly& h) const {
        long double acc = 0;
        const auto& c = h.coeffs();
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            BigRat v = *it;
            acc = acc * approx_ + static_cast<long double>(v.get_d());
        }
        return static_cast<double>(acc);
    }

private:
    IntPoly minpoly_;
    RatPoly mod_;
    mutable RootBox box_;
    double approx_ = 0;
};

/// Linear form sum_j v_j P_j(x) as a polynomial.
template <typename V>
RatPoly linear_form(const std::vector<IntPoly>& coeffs, const V& v) {
    RatPoly acc;
    for (size_t j = 0; j < coeffs.size(); ++j)
        if (v[j] != 0) acc = acc + BigRat(BigInt(v[j])) * to_rat(coeffs[j]);
    return acc;
}

} // namespace sailkit
