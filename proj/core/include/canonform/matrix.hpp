#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "canonform/errors.hpp"
#include "canonform/field.hpp"

namespace canonform {

/// Dense row-major matrix over an exact field. Every entry shares the field
/// carried by the matrix, so empty matrices still know their scalars.
template <class F>
class Matrix {
public:
    using Field = F;
    using Scalar = typename F::value_type;

    Matrix() = default;
    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

    static Matrix identity(const F& field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    static Matrix from_rows(const F& field, const std::vector<std::vector<Scalar>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        Matrix m(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) fail(ErrorCode::DimensionMismatch, "ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_ints(const F& field, std::initializer_list<std::initializer_list<long long>> rows) {
        std::vector<std::vector<Scalar>> v;
        for (const auto& row : rows) {
            v.emplace_back();
            for (long long x : row) v.back().push_back(field.from_int(x));
        }
        return from_rows(field, v);
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Scalar>& data() const { return data_; }
    std::vector<Scalar>& data() { return data_; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return x.is_zero(); });
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }
    Matrix operator*(const Scalar& s) const {
        Matrix r = *this;
        for (auto& x : r.data_) x *= s;
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) fail(ErrorCode::DimensionMismatch, "matrix product shape");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Scalar& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) fail(ErrorCode::DimensionMismatch, "block out of range");
        Matrix r(field_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
            fail(ErrorCode::DimensionMismatch, "set_block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    /// Row-major flattening as a column vector (rows*cols x 1).
    std::vector<Scalar> flatten() const { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Lexicographic comparison of shape then entries under the field order.
    friend bool operator<(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
        return a.data_ < b.data_;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).to_string();
            os << '\n';
        }
        return os.str();
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::DimensionMismatch, "matrix shapes differ");
    }

    F field_{default_field()};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;

    static F default_field() {
        if constexpr (std::is_same_v<F, PrimeField>) return PrimeField(2);
        else return F{};
    }
};

template <class F>
struct MatrixHash {
    std::size_t operator()(const Matrix<F>& m) const noexcept {
        std::size_t h = m.rows() * 1000003u ^ m.cols();
        ScalarHash sh;
        for (const auto& x : m.data()) h = h * 1099511628211ull ^ sh(x);
        return h;
    }
};

}  // namespace canonform
