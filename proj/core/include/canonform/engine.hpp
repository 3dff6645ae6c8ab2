#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "canonform/problem.hpp"
#include "canonform/weyr.hpp"

namespace canonform {

/// Half-open index range [start, start + size).
struct Interval {
    std::size_t start = 0, size = 0;
    std::size_t end() const { return start + size; }
    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// One leaf of the partition: consecutive indices, the original strip it came
/// from, and its linkage class (linked substrips transform identically).
struct Substrip {
    Interval range;
    std::size_t origin = 0;
    std::size_t link = 0;
    friend bool operator==(const Substrip&, const Substrip&) = default;
};

struct Partition {
    std::vector<Substrip> strips;  // sorted by start

    std::size_t count() const { return strips.size(); }
    std::size_t strip_at(std::size_t index) const;
    std::size_t link_count() const;
    std::string to_string() const;  // "[1|2|3,4]" with 1-based indices
    friend bool operator==(const Partition&, const Partition&) = default;
};

enum class BoxKind { Zero, Stairs, Weyr };
std::string_view to_string(BoxKind kind);

template <class F>
struct Box {
    std::size_t step = 0;
    Interval rows, cols;
    BoxKind kind = BoxKind::Zero;
    std::size_t rank = 0;        // Stairs
    WeyrStructure<F> weyr;       // Weyr
    Matrix<F> content;
    std::size_t additions = 0;   // dimension of the addition space

    std::string describe() const;
};

template <class F>
struct StepTrace {
    std::size_t step;
    Interval rows, cols;
    bool dependent;
    std::size_t stabilizer_dim;
    std::size_t radical_dim;
    std::size_t addition_dim;
    std::string partition;
};

template <class F>
struct CanonicalForm {
    Matrix<F> matrix;
    std::vector<Box<F>> boxes;
    Partition partition;
    StepSequence n;
    std::vector<StepTrace<F>> trace;

    /// Same matrix and box structure (the trace is ignored).
    bool same_as(const CanonicalForm& o) const;
};

/// Order of block addresses (row substrip, column substrip) of a k x k grid:
/// bottom strip first, left to right.
std::vector<std::pair<std::size_t, std::size_t>> box_order(std::size_t substrips);

template <class F>
class EngineState;

/// Precomputed data for one (problem, n) pair; canonicalize() may then be
/// called repeatedly and concurrently.
template <class F>
class Engine {
public:
    Engine(LinearMatrixProblem<F> problem, StepSequence n);

    const LinearMatrixProblem<F>& problem() const { return problem_; }
    const StepSequence& n() const { return n_; }
    const Inflation<F>& space() const { return space_; }
    const Inflation<F>& algebra() const { return algebra_; }
    std::size_t size() const { return n_.total(); }

    /// Throws NotInSpace, NonSplit or InternalInconsistency.
    CanonicalForm<F> canonicalize(const Matrix<F>& m, bool trace = false) const;

private:
    LinearMatrixProblem<F> problem_;
    StepSequence n_;
    Inflation<F> space_;
    Inflation<F> algebra_;
    friend class EngineState<F>;
};

/// Explicit reduction state; canonicalize() drives it to the end.
template <class F>
class EngineState {
public:
    EngineState(const Engine<F>& engine, const Matrix<F>& m, bool trace = false);

    bool done() const;
    /// Next unreduced block (row interval, column interval); StateOutOfOrder when done.
    std::pair<Interval, Interval> next_block() const;
    /// Basis of the changes that admissible transformations can make to the next block.
    std::vector<Matrix<F>> addition_space() const;
    void reduce_step();

    const Matrix<F>& matrix() const { return m_; }
    const Partition& partition() const { return partition_; }
    const std::vector<Box<F>>& boxes() const { return boxes_; }
    /// Current stabilizer (all S in the inflated algebra fixing the reduced entries).
    const std::vector<Matrix<F>>& stabilizer() const { return lambda_; }
    /// Members of the stabilizer with zero diagonal blocks.
    std::vector<Matrix<F>> stabilizer_radical() const;
    CanonicalForm<F> result() const;

private:
    struct Next {
        std::size_t p, q;
    };
    std::optional<Next> find_next() const;
    bool is_dependent(const Interval& rows, const Interval& cols) const;
    Vec<F> commutator_on(const Matrix<F>& s, const Interval& rows, const Interval& cols) const;
    void conjugate(const Matrix<F>& s);
    void restrict_stabilizer(const Interval& rows, const Interval& cols);
    void split(std::size_t strip, std::size_t offset);
    void refine_box(const Box<F>& box);
    void refine_all();
    void check_structure();
    void mark_reduced(const Interval& rows, const Interval& cols);
    Matrix<F> diagonal_transform(const std::vector<std::optional<Matrix<F>>>& per_link) const;

    const Engine<F>* engine_;
    Matrix<F> m_;
    Partition partition_;
    std::vector<Matrix<F>> lambda_;
    std::vector<bool> reduced_;  // row-major N x N
    Subspace<F> reduced_span_;   // coordinate functionals of reduced entries
    std::vector<Box<F>> boxes_;
    std::vector<StepTrace<F>> trace_;
    bool tracing_;
    std::size_t steps_ = 0;
};

template <class F>
CanonicalForm<F> canonicalize(const Matrix<F>& m, const LinearMatrixProblem<F>& problem, const StepSequence& n);

}  // namespace canonform
