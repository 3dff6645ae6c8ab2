#pragma once

// Independent brute-force reference computations used only by tests.

#include <canonform/matrix.hpp>

#include <vector>

namespace oracle {

using namespace canonform;

/// Determinant by cofactor expansion along the first row.
template <class F>
typename F::value_type laplace_det(const Matrix<F>& m) {
    const std::size_t n = m.rows();
    if (n == 0) return m.field().one();
    if (n == 1) return m(0, 0);
    auto det = m.field().zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        Matrix<F> minor(m.field(), n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        auto term = m(0, j) * laplace_det(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

/// Rank as the largest k with a nonzero k x k minor (exhaustive subsets).
template <class F>
std::size_t minor_rank(const Matrix<F>& m) {
    const std::size_t r = m.rows(), c = m.cols();
    std::size_t best = 0;
    for (std::uint32_t rs = 1; rs < (1u << r); ++rs)
        for (std::uint32_t cs = 1; cs < (1u << c); ++cs) {
            std::size_t k = __builtin_popcount(rs);
            if (k != static_cast<std::size_t>(__builtin_popcount(cs)) || k <= best) continue;
            std::vector<std::size_t> ri, ci;
            for (std::size_t i = 0; i < r; ++i)
                if (rs >> i & 1) ri.push_back(i);
            for (std::size_t j = 0; j < c; ++j)
                if (cs >> j & 1) ci.push_back(j);
            Matrix<F> sub(m.field(), k, k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(ri[a], ci[b]);
            if (!laplace_det(sub).is_zero()) best = k;
        }
    return best;
}

template <class F, class Rng>
Matrix<F> random_matrix(const F& field, std::size_t r, std::size_t c, Rng& rng) {
    Matrix<F> m(field, r, c);
    for (auto& x : m.data()) x = field.random(rng);
    return m;
}

template <class F>
Matrix<F> power(const Matrix<F>& a, std::size_t k) {
    auto r = Matrix<F>::identity(a.field(), a.rows());
    for (std::size_t i = 0; i < k; ++i) r = r * a;
    return r;
}

}  // namespace oracle
