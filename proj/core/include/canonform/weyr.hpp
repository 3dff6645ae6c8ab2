#pragma once

#include <string>
#include <vector>

#include "canonform/poly.hpp"

namespace canonform {

template <class F>
struct WeyrBlock {
    typename F::value_type eigenvalue;
    std::vector<std::size_t> partition;  // m_1 >= m_2 >= ... >= 1
    friend bool operator==(const WeyrBlock&, const WeyrBlock&) = default;
};

/// Eigenvalues strictly increasing, each with its Weyr partition.
template <class F>
struct WeyrStructure {
    std::vector<WeyrBlock<F>> blocks;

    std::size_t size() const;
    /// Diagonal blocks eigenvalue*I, superdiagonal blocks [I; 0].
    Matrix<F> matrix(const F& field) const;
    /// Jordan block sizes per eigenvalue (conjugate partitions).
    std::vector<std::vector<std::size_t>> jordan_sizes() const;
    std::string to_string() const;
    friend bool operator==(const WeyrStructure&, const WeyrStructure&) = default;
};

/// Conjugate (transpose) of a partition given in any order.
std::vector<std::size_t> conjugate_partition(std::vector<std::size_t> p);

template <class F>
struct JordanData {
    typename F::value_type eigenvalue;
    std::vector<std::size_t> block_sizes;
};

/// Throws DuplicateEigenvalue; the result is sorted by the field order.
template <class F>
WeyrStructure<F> weyr_from_jordan(const std::vector<JordanData<F>>& data);

template <class F>
struct WeyrResult {
    Matrix<F> w;
    Matrix<F> s;  // s^{-1} a s = w
    WeyrStructure<F> structure;
};

/// Throws NonSplit when the characteristic polynomial does not split.
template <class F>
WeyrResult<F> weyr_form(const Matrix<F>& a);

/// Sizes (m_11, m_12, ..., m_21, ...) concatenated over eigenvalues.
template <class F>
std::vector<std::size_t> commutant_partition(const WeyrStructure<F>& structure);

}  // namespace canonform
