#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "canonform/census.hpp"

namespace canonform {

/// Data of the reduction of right modules over a basic algebra to the
/// separated problem (algebra, algebra, radical).
template <class F>
struct ModuleProblem {
    BasicAlgebra<F> gamma;
    std::vector<Matrix<F>> idempotents;             // one per class
    std::vector<std::vector<std::size_t>> L;        // L[a][b] = dim e_a R e_b
    std::vector<std::size_t> delta;                 // delta[b] = dim R e_b
    std::vector<std::size_t> projective_dims;       // dim e_a Gamma
    std::vector<std::vector<Matrix<F>>> projective_bases;  // echelon basis of e_a Gamma
    SeparatedProblem<F> separated;

    std::size_t r() const { return idempotents.size(); }
};

/// Throws InternalInconsistency when the column sums of L or the dimensions of
/// the left projectives disagree with delta.
template <class F>
ModuleProblem<F> build_module_problem(const BasicAlgebra<F>& gamma);

struct DimensionPlan {
    std::vector<std::size_t> q, p;  // per class; p = q L
    StepSequence m, n;              // row and column step sequences of the corner
    std::size_t free_entries = 0;   // q L (q L)^T

    /// Step sequence of the embedded linear problem (m followed by n).
    StepSequence combined() const;
    std::string to_string() const;
};

/// All q with sum at most d, in graded lexicographic order.
template <class F>
std::vector<DimensionPlan> dimension_plans(const ModuleProblem<F>& mp, std::size_t d);

template <class F>
DimensionPlan make_plan(const ModuleProblem<F>& mp, std::vector<std::size_t> q, std::vector<std::size_t> p);

/// dim Q - rank(phi) for the presentation P -> Q given by the corner matrix phi
/// (sum m rows, sum n columns). Throws NotInRadicalSpace.
template <class F>
std::size_t module_dimension(const Matrix<F>& phi, const ModuleProblem<F>& mp, const DimensionPlan& plan);

struct BoundsRecord {
    std::size_t d = 0;
    mpz_class lemma_sum, theorem_bound1, theorem_bound2;
    double brustle_log = 0;  // natural log; -inf when the radical is zero
    bool chain_holds() const { return lemma_sum <= theorem_bound1 && theorem_bound1 <= theorem_bound2; }
};

/// Exact bounds; throws BoundViolated when the chain fails.
template <class F>
BoundsRecord bounds_report(const ModuleProblem<F>& mp, std::size_t d);

struct ModuleFamily {
    std::vector<std::size_t> q, p;  // minimal plan of the summand
    std::string key;                // family key of the summand's canonical form
    std::size_t dimension = 0;      // module dimension
    std::size_t parameters = 0;
    bool flagged = false;
    std::string corner;             // canonical corner matrix of the representative
};

struct PlanSummary {
    DimensionPlan plan;
    std::size_t s = 0;
    CensusMode mode = CensusMode::Exhaustive;
    std::uint64_t scanned = 0, families = 0;
};

struct ClassifyOptions {
    std::uint64_t budget = std::uint64_t{1} << 24;
    std::uint64_t sample_size = 4096;  // per plan, when exhaustive enumeration exceeds the budget
    std::uint64_t seed = 0;
    bool allow_sampling = true;        // otherwise BudgetExceeded
};

struct ModuleFamilyReport {
    std::size_t d = 0;
    std::uint64_t modulus = 0;
    std::vector<PlanSummary> plans;
    std::vector<ModuleFamily> families;  // indecomposable, 0 < dimension <= d, sorted
    BoundsRecord bounds;
    bool sampled = false;  // some plan was sampled, so counts are lower bounds

    std::size_t f_observed() const { return families.size(); }
    std::size_t parametric() const;
};

/// Runs a census per plan, splits the canonical forms into summands, removes
/// zero modules and duplicates across plans, and checks the bounds.
ModuleFamilyReport classify_modules(const ModuleProblem<PrimeField>& mp, std::size_t d,
                                    const ClassifyOptions& options = {});

std::string format_vector(const std::vector<std::size_t>& v);

}  // namespace canonform
