#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "canonform/engine.hpp"

namespace canonform {

/// Skeleton of a canonical form: box kinds, shapes, ranks and Weyr partitions,
/// with eigenvalues replaced by the index of their first appearance. Two forms
/// with the same key belong to the same parametric family.
template <class F>
std::string family_key(const CanonicalForm<F>& form);

/// One eigenvalue of one Weyr box, with the diagonal entries carrying it.
template <class F>
struct ParameterSlot {
    std::size_t box = 0;
    typename F::value_type value;
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    bool infinite = false;
    std::size_t admissible = 0;                           // probed values keeping the family
    std::vector<typename F::value_type> excluded;         // probed values that leave the family
};

enum class ConstraintKind { NotEqualConstant, NotEqualSlot, Precedes };

template <class F>
struct DomainConstraint {
    ConstraintKind kind;
    std::size_t slot = 0, other = 0;  // other: second slot for NotEqualSlot / Precedes
    typename F::value_type constant;  // NotEqualConstant

    std::string to_string() const;
};

/// A canonical form with its free Weyr eigenvalues turned into parameters.
template <class F>
struct ParametricForm {
    CanonicalForm<F> skeleton;  // the representative the slots were read from
    std::string key;
    std::vector<ParameterSlot<F>> slots;  // infinite slots first, by position
    std::vector<DomainConstraint<F>> domain;
    bool flagged = false;  // probed admissible sets not explained by the recorded domain

    std::size_t parameter_count() const;
    /// Skeleton with the infinite slots set to the given values (one per infinite slot).
    Matrix<F> substitute(const Engine<F>& engine, const std::vector<typename F::value_type>& values) const;
    /// True when the values satisfy every recorded constraint.
    bool admits(const std::vector<typename F::value_type>& values) const;
};

/// Slot probing: a slot is infinite when at least max(2, probes - slots) of the
/// probe values keep the family (the remaining values are explained by
/// disequalities with the other slots). Finite slots stay at their value.
template <class F>
ParametricForm<F> parametrize(const Engine<F>& engine, const CanonicalForm<F>& form);

template <class F>
struct Summand {
    std::vector<std::vector<std::size_t>> occurrences;  // index sets in the form, each ascending
    StepSequence n;                                     // sizes per original strip
    Matrix<F> matrix;

    std::size_t multiplicity() const { return occurrences.size(); }
    std::size_t size() const { return matrix.rows(); }
    bool in_space = true;  // the restriction is a member of the inflated space for n
};

/// Direct summands from the connected components of the index graph (nonzero
/// entries and corresponding indices of linked substrips are edges), grouped
/// by (n, matrix).
template <class F>
std::vector<Summand<F>> decompose(const Engine<F>& engine, const CanonicalForm<F>& form);

/// One big block: the form does not split into summands.
template <class F>
bool is_indecomposable(const Engine<F>& engine, const CanonicalForm<F>& form);

}  // namespace canonform
