#pragma once

// Small dense row-major matrix over an arbitrary scalar (exact or double).

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hypgeo {

template <class Scalar>
using Vec = std::vector<Scalar>;

template <class Scalar>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const Scalar& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n, const Scalar& zero, const Scalar& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_, data_.empty() ? Scalar{} : data_.front());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix r(x.rows_, y.cols_, x(0, 0) - x(0, 0));
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const Scalar& xik = x(i, k);
                for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }

    friend Vec<Scalar> operator*(const Matrix& x, const Vec<Scalar>& v) {
        if (x.cols_ != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
        Vec<Scalar> r(x.rows_, v.front() - v.front());
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t j = 0; j < x.cols_; ++j) r[i] += x(i, j) * v[j];
        return r;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

}  // namespace hypgeo
