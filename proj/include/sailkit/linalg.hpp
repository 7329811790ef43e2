#pragma once

#include <utility>
#include <vector>

#include "sailkit/matrix.hpp"

namespace sailkit {

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
        BigRat inv = 1 / m(row, col);
        for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            BigRat f = m(i, col);
            for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int rank(RatMatrix m) { return static_cast<int>(rref(m).size()); }

/// Basis of the right null space over Q, one vector per free column.
inline std::vector<std::vector<BigRat>> nullspace(RatMatrix m) {
    std::vector<int> piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (int p : piv) is_piv[p] = true;
    std::vector<std::vector<BigRat>> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<BigRat> v(m.cols(), BigRat(0));
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(static_cast<int>(r), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Saturated basis of the integer kernel {x in Z^N : E x = 0}, via unimodular
/// column operations on [E; I].
inline std::vector<std::vector<BigInt>> integer_kernel(const IntMatrix& e) {
    const int m = e.rows(), n = e.cols();
    IntMatrix w(m + n, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = e(i, j);
    for (int j = 0; j < n; ++j) w(m + j, j) = 1;
    auto col_axpy = [&](int dst, int src, const BigInt& f) {
        for (int i = 0; i < m + n; ++i) w(i, dst) -= f * w(i, src);
    };
    auto col_swap = [&](int a, int b) {
        for (int i = 0; i < m + n; ++i) std::swap(w(i, a), w(i, b));
    };
    int pc = 0;
    for (int r = 0; r < m && pc < n; ++r) {
        while (true) {
            int best = -1;
            for (int j = pc; j < n; ++j)
                if (w(r, j) != 0 && (best < 0 || abs(w(r, j)) < abs(w(r, best)))) best = j;
            if (best < 0) break;
            col_swap(pc, best);
            bool done = true;
            for (int j = pc + 1; j < n; ++j) {
                if (w(r, j) == 0) continue;
                col_axpy(j, pc, floor_div(w(r, j), w(r, pc)));
                if (w(r, j) != 0) done = false;
            }
            if (done) {
                ++pc;
                break;
            }
        }
    }
    std::vector<std::vector<BigInt>> out;
    for (int j = pc; j < n; ++j) {
        std::vector<BigInt> v;
        for (int i = 0; i < n; ++i) v.push_back(w(m + i, j));
        out.push_back(std::move(v));
    }
    return out;
}

/// LLL reduction (delta = 3/4) of linearly independent integer row vectors.
inline std::vector<std::vector<BigInt>> lll_reduce(std::vector<std::vector<BigInt>> b) {
    const size_t k = b.size();
    if (k <= 1) return b;
    const size_t dim = b[0].size();
    auto dot = [&](const std::vector<BigRat>& x, const std::vector<BigRat>& y) {
        BigRat s = 0;
        for (size_t i = 0; i < dim; ++i) s += x[i] * y[i];
        return s;
    };
    auto as_rat = [&](const std::vector<BigInt>& v) {
        std::vector<BigRat> r;
        for (const auto& x : v) r.emplace_back(x);
        return r;
    };
    std::vector<std::vector<BigRat>> bs(k);
    std::vector<std::vector<BigRat>> mu(k, std::vector<BigRat>(k, BigRat(0)));
    std::vector<BigRat> nrm(k);
    auto gram_schmidt = [&]() {
        for (size_t i = 0; i < k; ++i) {
            bs[i] = as_rat(b[i]);
            for (size_t j = 0; j < i; ++j) {
                mu[i][j] = dot(as_rat(b[i]), bs[j]) / nrm[j];
                for (size_t t = 0; t < dim; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
            }
            nrm[i] = dot(bs[i], bs[i]);
        }
    };
    gram_schmidt();
    size_t i = 1;
    const BigRat delta(3, 4);
    while (i < k) {
        for (size_t j = i; j-- > 0;) {
            BigRat m = mu[i][j];
            BigInt q = floor_of(m + BigRat(1, 2));
            if (q != 0) {
                for (size_t t = 0; t < dim; ++t) b[i][t] -= q * b[j][t];
                gram_schmidt();
            }
        }
        if (nrm[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * nrm[i - 1]) {
            ++i;
        } else {
            std::swap(b[i], b[i - 1]);
            gram_schmidt();
            i = std::max<size_t>(i - 1, 1);
        }
    }
    return b;
}

} // namespace sailkit
