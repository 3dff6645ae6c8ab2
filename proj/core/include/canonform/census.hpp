#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "canonform/families.hpp"
#include "canonform/multipoly.hpp"

namespace canonform {

enum class CensusMode { Exhaustive, Sample };

struct CensusOptions {
    CensusMode mode = CensusMode::Exhaustive;
    std::uint64_t sample_size = 0;
    std::uint64_t seed = 0;
    std::uint64_t budget = std::uint64_t{1} << 24;
    std::size_t shard_index = 0, shard_count = 1;
    std::size_t threads = 1;
    bool parametrize = true;  // probe parameter slots of each family representative
};

struct FamilyRecord {
    std::string key;
    std::uint64_t members = 0;
    std::uint64_t first_index = 0;             // enumeration index of the representative
    std::vector<std::uint32_t> representative;  // input matrix, row-major
    std::size_t parameters = 0;
    bool indecomposable = false;
    bool flagged = false;
};

struct CensusReport {
    std::string problem_id;
    StepSequence n;
    std::uint64_t modulus = 0;
    CensusMode mode = CensusMode::Exhaustive;
    std::size_t shard_index = 0, shard_count = 1;
    std::uint64_t scanned = 0;
    std::uint64_t non_split = 0;
    std::set<std::vector<std::uint64_t>> forms;  // canonical matrices, row-major representatives
    std::vector<FamilyRecord> families;          // sorted by key
    std::size_t s = 0;
    mpz_class bound;  // 4^s

    std::uint64_t distinct_forms() const { return forms.size(); }
    std::size_t indecomposable_families() const;
    std::size_t parametric_families() const;  // families with at least one parameter
    std::uint64_t member_total() const;
};

/// Scans this shard's part of the enumeration (exhaustive) or its share of the
/// sample. Families carry counts and representatives only.
CensusReport census_scan(const Engine<PrimeField>& engine, const CensusOptions& options,
                         const std::string& problem_id = "");

/// Associative and commutative merge of partial reports for the same problem.
CensusReport merge_reports(const CensusReport& a, const CensusReport& b);

/// Fills parameter counts and indecomposability from the representatives.
void finalize_report(CensusReport& report, const Engine<PrimeField>& engine, bool parametrize = true);

/// Throws BoundViolated listing the family keys when families exceed 4^s.
void check_bound(const CensusReport& report);

/// Scan (over all shards of options when shard_count == 1, in parallel when
/// threads > 1), merge, finalize and check the bound.
/// Throws BudgetExceeded when p^s (exhaustive) or the sample size exceeds the budget.
CensusReport full_census(const LinearMatrixProblem<PrimeField>& problem, const StepSequence& n, const PrimeField& field,
                         const CensusOptions& options, const std::string& problem_id = "");

std::string to_string(CensusMode mode);

// ------------------------------------------------------------ point counts

using BiPoly = MultiPoly<PrimeField>;

/// Polynomial in x, y; accepts "2x - y + 3", "x*y - 1", "x^2 + 4".
BiPoly parse_bipoly(const PrimeField& field, const std::string& text);

/// m x n matrix of polynomials of total degree at most one in x, y.
struct BivariateLinearMatrix {
    PrimeField field;
    std::size_t rows = 0, cols = 0;
    std::vector<BiPoly> entries;  // row-major

    /// Throws InvalidArgument for a degree above one or a shape mismatch.
    static BivariateLinearMatrix make(const PrimeField& field, std::size_t rows, std::size_t cols,
                                      std::vector<BiPoly> entries);
    static BivariateLinearMatrix random(const PrimeField& field, std::size_t rows, std::size_t cols,
                                        std::mt19937_64& rng);
    const BiPoly& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
    Matrix<PrimeField> eval(const Fp& x, const Fp& y) const;
    /// All rows x rows minors.
    std::vector<BiPoly> maximal_minors() const;
};

struct PointCount {
    std::size_t count = 0;
    std::vector<std::pair<Fp, Fp>> points;
    bool hypothesis_ok = false;  // gcd of the relevant polynomials is a nonzero constant
    std::optional<BiPoly> gcd;  // absent when every polynomial vanishes
    std::size_t bound = 0;  // asserted bound when the hypothesis holds
};

/// Points of GF(p)^2 where the rows become dependent. When the maximal minors
/// are coprime, asserts count <= m^2 (and <= 3 for m = 2); throws LemmaViolated otherwise.
PointCount dependent_points(const BivariateLinearMatrix& a);

/// Common zeros over GF(p)^2. When the gcd is constant, asserts count <= m^2
/// with m the largest total degree; throws LemmaViolated otherwise.
PointCount common_roots(const std::vector<BiPoly>& polys);

}  // namespace canonform
