#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "canonform/matrix.hpp"

namespace canonform {

template <class F>
using Vec = std::vector<typename F::value_type>;

template <class F>
struct RrefResult {
    Matrix<F> reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    /// Basis of {v : m v = 0}; one vector per non-pivot column.
    std::vector<Vec<F>> nullspace;
};

/// Reduced row-echelon form by Gauss-Jordan elimination with leftmost pivots.
template <class F>
RrefResult<F> rref(const Matrix<F>& m) {
    RrefResult<F> out;
    Matrix<F> a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a(piv, c).is_zero()) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (std::size_t j = c; j < cols; ++j) std::swap(a(piv, j), a(r, j));
        auto inv = a(r, c).inverse();
        for (std::size_t j = c; j < cols; ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            auto f = a(i, c);
            for (std::size_t j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    std::vector<bool> is_pivot(cols, false);
    for (auto p : out.pivots) is_pivot[p] = true;
    const auto& field = m.field();
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec<F> v(cols, field.zero());
        v[f] = field.one();
        for (std::size_t i = 0; i < out.pivots.size(); ++i) v[out.pivots[i]] = -a(i, f);
        out.nullspace.push_back(std::move(v));
    }
    out.reduced = std::move(a);
    return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

template <class F>
std::vector<Vec<F>> nullspace(const Matrix<F>& m) {
    return rref(m).nullspace;
}

/// Stacks vectors as the rows of a matrix.
template <class F>
Matrix<F> rows_matrix(const F& field, const std::vector<Vec<F>>& vs, std::size_t width) {
    Matrix<F> m(field, vs.size(), width);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].size() != width) fail(ErrorCode::DimensionMismatch, "vector length");
        for (std::size_t j = 0; j < width; ++j) m(i, j) = vs[i][j];
    }
    return m;
}

template <class F>
Vec<F> mat_vec(const Matrix<F>& a, const Vec<F>& x) {
    Vec<F> y(a.rows(), a.field().zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!x[j].is_zero()) y[i] += a(i, j) * x[j];
    return y;
}

template <class F>
std::optional<Matrix<F>> try_inverse(const Matrix<F>& m) {
    if (!m.square()) fail(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
    const std::size_t n = m.rows();
    Matrix<F> aug(m.field(), n, 2 * n);
    aug.set_block(0, 0, m);
    aug.set_block(0, n, Matrix<F>::identity(m.field(), n));
    auto r = rref(aug);
    if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) return std::nullopt;
    return r.reduced.block(0, n, n, n);
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
    auto inv = try_inverse(m);
    if (!inv) fail(ErrorCode::DivisionByZero, "matrix is singular");
    return *inv;
}

template <class F>
typename F::value_type determinant(const Matrix<F>& m) {
    if (!m.square()) fail(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
    Matrix<F> a = m;
    const std::size_t n = a.rows();
    auto det = m.field().one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c).is_zero()) ++piv;
        if (piv == n) return m.field().zero();
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        auto inv = a(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero()) continue;
            auto f = a(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& a, const Vec<F>& b) {
    Matrix<F> aug(a.field(), a.rows(), a.cols() + 1);
    aug.set_block(0, 0, a);
    for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
    auto r = rref(aug);
    if (!r.pivots.empty() && r.pivots.back() == a.cols()) return std::nullopt;
    Vec<F> x(a.cols(), a.field().zero());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced(i, a.cols());
    return x;
}

/// Subspace of k^n held as an echelonized basis; supports membership and
/// canonical coset representatives with respect to a coordinate order.
template <class F>
class Subspace {
public:
    using Scalar = typename F::value_type;

    Subspace(F field, std::size_t ambient) : Subspace(std::move(field), ambient, {}) {}

    /// `order` lists coordinates by elimination priority (first = eliminated first).
    Subspace(F field, std::size_t ambient, const std::vector<Vec<F>>& spanning,
             std::vector<std::size_t> order = {})
        : field_(std::move(field)), n_(ambient), order_(std::move(order)) {
        if (order_.empty())
            for (std::size_t i = 0; i < n_; ++i) order_.push_back(i);
        for (const auto& v : spanning) add(v);
    }

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vec<F>>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Eliminates pivot coordinates of v; the result is the canonical coset
    /// representative of v modulo this subspace.
    Vec<F> reduce(Vec<F> v) const {
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const auto& c = v[pivots_[k]];
            if (c.is_zero()) continue;
            Scalar f = c;
            for (std::size_t j = 0; j < n_; ++j)
                if (!basis_[k][j].is_zero()) v[j] -= f * basis_[k][j];
        }
        return v;
    }

    bool contains(const Vec<F>& v) const {
        auto r = reduce(v);
        for (const auto& x : r)
            if (!x.is_zero()) return false;
        return true;
    }

    /// Adds v; returns false when v was already in the span.
    bool add(const Vec<F>& v) {
        if (v.size() != n_) fail(ErrorCode::DimensionMismatch, "subspace vector length");
        auto r = reduce(v);
        std::size_t piv = n_;
        for (std::size_t idx : order_)
            if (!r[idx].is_zero()) {
                piv = idx;
                break;
            }
        if (piv == n_) return false;
        auto inv = r[piv].inverse();
        for (auto& x : r) x *= inv;
        // keep the basis fully reduced on pivot coordinates
        for (auto& b : basis_) {
            if (b[piv].is_zero()) continue;
            Scalar f = b[piv];
            for (std::size_t j = 0; j < n_; ++j)
                if (!r[j].is_zero()) b[j] -= f * r[j];
        }
        basis_.push_back(std::move(r));
        pivots_.push_back(piv);
        return true;
    }

private:
    F field_;
    std::size_t n_;
    std::vector<std::size_t> order_;
    std::vector<Vec<F>> basis_;
    std::vector<std::size_t> pivots_;
};

}  // namespace canonform
