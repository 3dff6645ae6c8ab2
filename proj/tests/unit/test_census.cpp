#include <gtest/gtest.h>

#include <canonform/census.hpp>

#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"

using namespace canonform;

namespace {

std::string data(const std::string& name) { return std::string(CANONFORM_TEST_DATA) + "/" + name; }

LinearMatrixProblem<PrimeField> load(const std::string& name, const PrimeField& field) {
    return load_problem(read_problem_file(data(name)), field).linear();
}

using M = Matrix<PrimeField>;

// Orbits of all 2x2 matrices over GF(p) under conjugation by GL_2, by union-find.
struct OrbitCensus {
    std::size_t split_orbits = 0, non_split_matrices = 0;
    std::map<std::string, std::uint64_t> type_members;  // orbit type -> member count
};

std::uint64_t code(const M& m, std::uint32_t p) {
    std::uint64_t c = 0;
    for (const auto& x : m.data()) c = c * p + x.value();
    return c;
}

M decode(const PrimeField& f, std::uint64_t c) {
    const auto p = f.modulus();
    M m(f, 2, 2);
    for (std::size_t k = 4; k-- > 0;) {
        m.data()[k] = f.from_int(static_cast<long long>(c % p));
        c /= p;
    }
    return m;
}

OrbitCensus brute_force_similarity(const PrimeField& f) {
    const auto p = f.modulus();
    const std::uint64_t total = std::uint64_t{p} * p * p * p;
    std::vector<M> group;
    for (std::uint64_t c = 0; c < total; ++c) {
        auto g = decode(f, c);
        if (!oracle::laplace_det(g).is_zero()) group.push_back(g);
    }
    std::vector<std::uint64_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::uint64_t(std::uint64_t)> find = [&](std::uint64_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::uint64_t c = 0; c < total; ++c) {
        auto a = decode(f, c);
        for (const auto& g : group) parent[find(code(*try_inverse(g) * a * g, p))] = find(c);
    }
    OrbitCensus out;
    std::map<std::uint64_t, bool> seen;
    for (std::uint64_t c = 0; c < total; ++c) {
        auto a = decode(f, c);
        // type from the eigenvalues found by brute force
        std::vector<Fp> roots;
        for (std::uint32_t v = 0; v < p; ++v) {
            auto lam = f.from_int(v);
            M shifted = a - M::identity(f, 2) * lam;
            if (oracle::laplace_det(shifted).is_zero()) roots.push_back(lam);
        }
        const bool is_root = find(c) == c;
        if (roots.empty()) {
            ++out.non_split_matrices;
            continue;
        }
        std::string type;
        if (roots.size() == 2)
            type = "distinct";
        else if (a == M::identity(f, 2) * roots[0])
            type = "scalar";
        else
            type = "jordan";
        ++out.type_members[type];
        if (is_root) ++out.split_orbits;
    }
    return out;
}

}  // namespace

TEST(Census, OneByOneSimilarity) {
    PrimeField f(5);
    auto r = full_census(load("similarity.prob", f), StepSequence{{1}}, f, {});
    EXPECT_EQ(r.scanned, 5u);
    EXPECT_EQ(r.distinct_forms(), 5u);
    ASSERT_EQ(r.families.size(), 1u);
    EXPECT_EQ(r.families[0].members, 5u);
    EXPECT_EQ(r.families[0].parameters, 1u);
    EXPECT_EQ(r.bound, 4);
    EXPECT_EQ(r.indecomposable_families(), 1u);
}

TEST(Census, TwoByTwoSimilarityMatchesOrbits) {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField f(p);
        auto r = full_census(load("similarity.prob", f), StepSequence{{2}}, f, {});
        auto oracle = brute_force_similarity(f);
        EXPECT_EQ(r.scanned, std::uint64_t{p} * p * p * p);
        EXPECT_EQ(r.non_split, oracle.non_split_matrices);
        EXPECT_EQ(r.distinct_forms(), oracle.split_orbits);
        EXPECT_EQ(r.families.size(), oracle.type_members.size());
        std::multiset<std::uint64_t> a, b;
        for (const auto& fam : r.families) a.insert(fam.members);
        for (const auto& [t, n] : oracle.type_members) b.insert(n);
        EXPECT_EQ(a, b);
        EXPECT_EQ(r.member_total() + r.non_split, r.scanned);
    }
}

TEST(Census, ShardsMergeToFullRun) {
    PrimeField f(3);
    auto problem = load("example.prob", f);
    CensusOptions all;
    all.parametrize = false;
    auto full = full_census(problem, StepSequence{{1, 1}}, f, all);
    Engine<PrimeField> e(problem, StepSequence{{1, 1}});
    std::vector<CensusReport> parts;
    for (std::size_t k = 0; k < 3; ++k) {
        CensusOptions o = all;
        o.shard_index = k;
        o.shard_count = 3;
        parts.push_back(census_scan(e, o));
    }
    auto merged = merge_reports(merge_reports(parts[2], parts[0]), parts[1]);
    auto other = merge_reports(parts[0], merge_reports(parts[1], parts[2]));
    finalize_report(merged, e, false);
    finalize_report(other, e, false);
    for (const auto* r : {&merged, &other}) {
        EXPECT_EQ(r->scanned, full.scanned);
        EXPECT_EQ(r->forms, full.forms);
        ASSERT_EQ(r->families.size(), full.families.size());
        for (std::size_t k = 0; k < full.families.size(); ++k) {
            EXPECT_EQ(r->families[k].key, full.families[k].key);
            EXPECT_EQ(r->families[k].members, full.families[k].members);
            EXPECT_EQ(r->families[k].first_index, full.families[k].first_index);
        }
    }
    CensusOptions threaded = all;
    threaded.threads = 3;
    auto t = full_census(problem, StepSequence{{1, 1}}, f, threaded);
    EXPECT_EQ(t.forms, full.forms);
    EXPECT_EQ(t.families.size(), full.families.size());
}

TEST(Census, BudgetAndSampling) {
    PrimeField f(3);
    auto problem = load("example.prob", f);
    CensusOptions tight;
    tight.budget = 80;
    try {
        full_census(problem, StepSequence{{1, 1}}, f, tight);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
    CensusOptions sample;
    sample.mode = CensusMode::Sample;
    sample.sample_size = 200;
    sample.seed = 7;
    sample.parametrize = false;
    auto a = full_census(problem, StepSequence{{2, 2}}, f, sample);
    auto b = full_census(problem, StepSequence{{2, 2}}, f, sample);
    EXPECT_EQ(a.scanned, 200u);
    EXPECT_EQ(a.forms, b.forms);
    EXPECT_EQ(a.member_total() + a.non_split, a.scanned);
    EXPECT_LE(mpz_class(static_cast<unsigned long>(a.families.size())), a.bound);
}

TEST(PointCounts, ParseBipoly) {
    PrimeField f(7);
    auto p = parse_bipoly(f, "x*y - 1");
    EXPECT_EQ(p.total_degree(), 2);
    EXPECT_EQ(p.eval({f.from_int(2), f.from_int(4)}), f.zero());
    auto q = parse_bipoly(f, "2x - y + 3");
    EXPECT_EQ(q.eval({f.from_int(1), f.from_int(5)}), f.zero());
    EXPECT_EQ(parse_bipoly(f, "x^2 + 4").eval({f.from_int(3), f.zero()}), f.from_int(6));
    EXPECT_THROW(parse_bipoly(f, "x +"), Error);
    EXPECT_THROW(parse_bipoly(f, "z"), Error);
}

TEST(PointCounts, DependentPointExamples) {
    PrimeField f(11);
    auto P = [&](const char* s) { return parse_bipoly(f, s); };
    auto id = BivariateLinearMatrix::make(f, 2, 2, {P("1"), P("0"), P("0"), P("1")});
    auto r = dependent_points(id);
    EXPECT_EQ(r.count, 0u);
    EXPECT_TRUE(r.hypothesis_ok);

    auto diag = BivariateLinearMatrix::make(f, 2, 2, {P("x"), P("0"), P("0"), P("y")});
    r = dependent_points(diag);
    EXPECT_FALSE(r.hypothesis_ok);
    EXPECT_EQ(r.count, 21u);  // the two axes

    // minors 1 - x^2, -xy, -y vanish together exactly at y = 0, x = +-1
    auto a = BivariateLinearMatrix::make(f, 2, 3, {P("1"), P("x"), P("y"), P("x"), P("1"), P("0")});
    r = dependent_points(a);
    EXPECT_TRUE(r.hypothesis_ok);
    EXPECT_EQ(r.count, 2u);
    EXPECT_THROW(BivariateLinearMatrix::make(f, 1, 1, {P("x*y")}), Error);
}

TEST(PointCounts, CommonRootExamples) {
    PrimeField f(7);
    auto P = [&](const char* s) { return parse_bipoly(f, s); };
    auto r = common_roots({P("x"), P("y")});
    EXPECT_EQ(r.count, 1u);
    EXPECT_TRUE(r.hypothesis_ok);
    r = common_roots({P("x*y - 1"), P("x - y")});
    EXPECT_EQ(r.count, 2u);
    EXPECT_LE(r.count, r.bound);
    r = common_roots({P("x"), P("x + 1")});
    EXPECT_EQ(r.count, 0u);
    r = common_roots({P("x*y"), P("x*y + x")});
    EXPECT_FALSE(r.hypothesis_ok);
}

TEST(PointCounts, DependentPointsMatchCommonRootsOfMinors) {
    PrimeField f(11);
    std::mt19937_64 rng(43);
    for (int k = 0; k < 100; ++k) {
        auto a = BivariateLinearMatrix::random(f, 2, 3, rng);
        auto minors = a.maximal_minors();
        ASSERT_EQ(minors.size(), 3u);
        // minors checked against a direct 2x2 determinant at a random point
        auto x = f.random(rng), y = f.random(rng);
        auto m = a.eval(x, y);
        EXPECT_EQ(minors[0].eval({x, y}), m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
        try {
            auto d = dependent_points(a);
            auto c = common_roots(minors);
            EXPECT_EQ(d.count, c.count);
            EXPECT_EQ(d.hypothesis_ok, c.hypothesis_ok);
        } catch (const Error& e) {
            ADD_FAILURE() << e.what();
        }
    }
}
