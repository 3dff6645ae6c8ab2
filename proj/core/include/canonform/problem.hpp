#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "canonform/linalg.hpp"

namespace canonform {

/// Partition of {0..t-1}; classes sorted by least element.
using IndexClasses = std::vector<std::vector<std::size_t>>;

std::string format_classes(const IndexClasses& classes);  // "{1,2},{3}" (1-based)

/// Subspace of t x l matrices held by an echelonized basis.
template <class F>
class MatrixSpace {
public:
    MatrixSpace(F field, std::size_t rows, std::size_t cols, const std::vector<Matrix<F>>& spanning = {});

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Matrix<F>>& basis() const { return basis_; }

    bool contains(const Matrix<F>& m) const;
    /// Coordinates of m on basis(); nullopt when m is outside the space.
    std::optional<Vec<F>> coordinates(const Matrix<F>& m) const;

private:
    F field_;
    std::size_t rows_, cols_;
    Subspace<F> span_;
    std::vector<Matrix<F>> basis_;
};

/// Unital upper-triangular algebra closed under taking diagonal parts.
template <class F>
class BasicAlgebra {
public:
    /// Throws NotTriangular, MissingIdentity, NotClosedUnderMultiplication or
    /// DiagonalProjectionFails with the offending witness.
    static BasicAlgebra validate(F field, std::size_t t, const std::vector<Matrix<F>>& basis);

    const F& field() const { return space_.field(); }
    std::size_t t() const { return space_.rows(); }
    std::size_t dim() const { return space_.dim(); }
    const std::vector<Matrix<F>>& basis() const { return space_.basis(); }
    const MatrixSpace<F>& space() const { return space_; }
    bool contains(const Matrix<F>& m) const { return space_.contains(m); }

    /// Equivalence classes i ~ j (equal diagonal entries on every member).
    const IndexClasses& classes() const { return classes_; }
    std::size_t r() const { return classes_.size(); }
    std::size_t class_of(std::size_t i) const { return class_of_[i]; }
    /// Members with zero diagonal.
    const MatrixSpace<F>& radical() const { return radical_; }
    /// Diagonal idempotent of class alpha.
    Matrix<F> idempotent(std::size_t alpha) const;

private:
    BasicAlgebra(MatrixSpace<F> space, MatrixSpace<F> radical, IndexClasses classes);

    MatrixSpace<F> space_;
    MatrixSpace<F> radical_;
    IndexClasses classes_;
    std::vector<std::size_t> class_of_;
};

/// Block sizes n_1..n_t; must be constant on equivalence classes.
struct StepSequence {
    std::vector<std::size_t> sizes;

    std::size_t length() const { return sizes.size(); }
    std::size_t total() const;
    std::vector<std::size_t> offsets() const;  // length t+1
    std::string to_string() const;             // "(2,2)"

    /// Parses "2,2" or "(2,2)".
    static StepSequence parse(const std::string& text);
    friend bool operator==(const StepSequence&, const StepSequence&) = default;
};

void check_step_sequence(const IndexClasses& classes, const StepSequence& n);

template <class F>
struct LinearMatrixProblem {
    BasicAlgebra<F> gamma;
    MatrixSpace<F> space;

    /// Checks that the space is a Gamma-bimodule (NotClosedUnderAction).
    static LinearMatrixProblem make(BasicAlgebra<F> gamma, MatrixSpace<F> space);
};

template <class F>
struct SeparatedProblem {
    BasicAlgebra<F> gamma;  // acts on rows
    BasicAlgebra<F> delta;  // acts on columns
    MatrixSpace<F> space;   // t x l

    static SeparatedProblem make(BasicAlgebra<F> gamma, BasicAlgebra<F> delta, MatrixSpace<F> space);
};

/// Block-diagonal algebra Gamma x Delta with the space in the top-right corner.
template <class F>
LinearMatrixProblem<F> separated_to_linear(const SeparatedProblem<F>& sp);

/// One scalar position (i, j) of the small t x l grid.
struct BlockPos {
    std::size_t row, col;
    friend bool operator==(const BlockPos&, const BlockPos&) = default;
};

/// Positions of the grid in the order used for free-block selection: bottom
/// strip first, left to right within a strip.
std::vector<BlockPos> grid_order(std::size_t rows, std::size_t cols);

template <class F>
struct BlockInfo {
    BlockPos pos;
    bool free = false;
    /// For dependent blocks: block = sum coeff * (earlier free block).
    std::vector<std::pair<std::size_t, typename F::value_type>> expression;  // (index into blocks, coeff)
};

template <class F>
struct FreeBlockStructure {
    std::vector<BlockInfo<F>> blocks;  // in grid order
    std::size_t s = 0;                 // number of free entries
};

/// A small-grid space lifted to block matrices with row sizes m and column
/// sizes n: every scalar relation among entries becomes the same relation
/// among blocks. Row/column classes must make m, n step-sequences.
template <class F>
class Inflation {
public:
    Inflation(const MatrixSpace<F>& space, const IndexClasses& row_classes, const IndexClasses& col_classes,
              StepSequence m, StepSequence n);

    const F& field() const { return space_.field(); }
    const StepSequence& row_sizes() const { return m_; }
    const StepSequence& col_sizes() const { return n_; }
    std::size_t rows() const { return m_.total(); }
    std::size_t cols() const { return n_.total(); }

    const FreeBlockStructure<F>& free_blocks() const { return free_; }
    std::size_t s() const { return free_.s; }
    std::size_t dim() const { return basis_.size(); }
    /// Basis of the inflated space, one member per free entry, in free-entry order.
    const std::vector<Matrix<F>>& basis() const { return basis_; }

    bool contains(const Matrix<F>& x) const;
    /// Assembles the member with the given free-entry values (length s).
    Matrix<F> from_free(const Vec<F>& values) const;
    /// Reads the free entries back.
    Vec<F> free_values(const Matrix<F>& x) const;

private:
    MatrixSpace<F> space_;
    IndexClasses row_classes_, col_classes_;
    std::vector<std::size_t> row_class_of_, col_class_of_;
    StepSequence m_, n_;
    std::vector<std::size_t> row_off_, col_off_;
    FreeBlockStructure<F> free_;
    std::vector<Matrix<F>> basis_;
};

template <class F>
Inflation<F> inflate(const LinearMatrixProblem<F>& problem, const StepSequence& n);
template <class F>
Inflation<F> inflate_algebra(const BasicAlgebra<F>& gamma, const StepSequence& n);
template <class F>
Inflation<F> inflate_radical(const BasicAlgebra<F>& gamma, const StepSequence& n);

/// Random invertible member of the inflated algebra: invertible class blocks
/// on the diagonal plus a random radical part.
template <class F>
class InvertibleSampler {
public:
    InvertibleSampler(const BasicAlgebra<F>& gamma, const StepSequence& n);
    Matrix<F> operator()(std::mt19937_64& rng, int max_retries = 1000) const;

private:
    F field_;
    IndexClasses classes_;
    StepSequence n_;
    std::vector<std::size_t> offsets_;
    Inflation<F> radical_;
};

template <class F>
Matrix<F> sample_invertible(const BasicAlgebra<F>& gamma, const StepSequence& n, std::mt19937_64& rng,
                            int max_retries = 1000);

/// Problem definition file, scalars still as text.
struct ProblemText {
    FieldSpec field;
    std::size_t t = 0;
    std::optional<std::size_t> l;
    std::optional<IndexClasses> classes;
    std::vector<std::vector<std::vector<std::string>>> gamma, delta, space;
    std::vector<std::size_t> gamma_lines, delta_lines, space_lines;

    bool separated() const { return !delta.empty() || l.has_value(); }
};

ProblemText parse_problem_text(const std::string& text);
ProblemText read_problem_file(const std::string& path);

/// Parses a matrix given as whitespace-separated rows, one row per line.
template <class F>
Matrix<F> parse_matrix(const F& field, const std::string& text);
std::vector<std::vector<std::string>> split_matrix_rows(const std::string& text);

template <class F>
struct LoadedProblem {
    BasicAlgebra<F> gamma;
    std::optional<BasicAlgebra<F>> delta;
    MatrixSpace<F> space;

    bool separated() const { return delta.has_value(); }
    LinearMatrixProblem<F> linear() const;
    SeparatedProblem<F> as_separated() const;
};

/// Validates the text against a concrete field (which may override the file's).
template <class F>
LoadedProblem<F> load_problem(const ProblemText& text, const F& field);

/// Gamma only; the space and delta sections may be absent.
template <class F>
BasicAlgebra<F> load_algebra(const ProblemText& text, const F& field);

}  // namespace canonform
