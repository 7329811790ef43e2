#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sailkit/bigint.hpp"

namespace sailkit {

/// Dense row-major matrix over an exact ring.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_) fail(ErrorKind::Parse, "ragged matrix literal");
            for (long v : r) a_.emplace_back(v);
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n() const { return rows_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) fail(ErrorKind::Domain, "matrix dimension mismatch in product");
        Matrix r(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0) continue;
                for (int j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        check_same(x, y);
        Matrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        check_same(x, y);
        Matrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& v : r.a_) v = -v;
        return r;
    }
    friend Matrix operator*(const T& s, const Matrix& x) {
        Matrix r = x;
        for (auto& v : r.a_) v *= s;
        return r;
    }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator<(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_) return x.rows_ < y.rows_;
        if (x.cols_ != y.cols_) return x.cols_ < y.cols_;
        return x.a_ < y.a_;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    T trace() const {
        T t(0);
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    std::vector<T> column(int j) const {
        std::vector<T> c;
        for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
        return c;
    }

    const std::vector<T>& data() const { return a_; }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << "[";
        for (int i = 0; i < m.rows_; ++i) {
            os << (i ? ",[" : "[");
            for (int j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

private:
    static void check_same(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) fail(ErrorKind::Domain, "matrix dimension mismatch");
    }

    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<BigRat>;

inline RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

inline bool is_integral(const RatMatrix& m) {
    for (const auto& v : m.data())
        if (v.get_den() != 1) return false;
    return true;
}

inline IntMatrix to_int(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) fail(ErrorKind::Domain, "matrix is not integral");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

template <typename T>
Matrix<T> mat_pow(Matrix<T> m, long e) {
    Matrix<T> r = Matrix<T>::identity(m.rows());
    if (e < 0) fail(ErrorKind::Domain, "negative matrix power");
    while (e > 0) {
        if (e & 1) r = r * m;
        m = m * m;
        e >>= 1;
    }
    return r;
}

} // namespace sailkit
