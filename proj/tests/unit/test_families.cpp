#include <gtest/gtest.h>

#include <canonform/families.hpp>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace canonform;

namespace {

std::string data(const std::string& name) { return std::string(CANONFORM_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
LinearMatrixProblem<F> load(const std::string& name, const F& field) {
    return load_problem(read_problem_file(data(name)), field).linear();
}

template <class F>
Matrix<F> reassemble(const std::vector<Summand<F>>& parts, const Matrix<F>& original) {
    Matrix<F> out(original.field(), original.rows(), original.cols());
    for (const auto& s : parts)
        for (const auto& idx : s.occurrences)
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = 0; b < idx.size(); ++b) out(idx[a], idx[b]) = s.matrix(a, b);
    return out;
}

}  // namespace

TEST(Families, KeyErasesEigenvaluesKeepsPattern) {
    PrimeField f(7);
    auto p = load_problem(read_problem_file(data("similarity.prob")), f).linear();
    Engine<PrimeField> e(p, StepSequence{{2}});
    auto a = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{1, 0}, {0, 2}}));
    auto b = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{3, 0}, {0, 5}}));
    auto c = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{4, 0}, {0, 4}}));
    auto d = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{4, 1}, {0, 4}}));
    EXPECT_EQ(family_key(a), family_key(b));
    EXPECT_NE(family_key(a), family_key(c));
    EXPECT_NE(family_key(c), family_key(d));
}

TEST(Families, ParametrizeDiagonal) {
    PrimeField f(7);
    auto p = load_problem(read_problem_file(data("similarity.prob")), f).linear();
    Engine<PrimeField> e(p, StepSequence{{2}});
    auto form = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{1, 0}, {0, 2}}));
    auto pf = parametrize(e, form);
    EXPECT_EQ(pf.parameter_count(), 2u);
    EXPECT_FALSE(pf.flagged);
    ASSERT_EQ(pf.domain.size(), 1u);
    EXPECT_EQ(pf.domain[0].kind, ConstraintKind::Precedes);
    EXPECT_TRUE(pf.admits({f.from_int(3), f.from_int(5)}));
    EXPECT_FALSE(pf.admits({f.from_int(5), f.from_int(3)}));
    EXPECT_FALSE(pf.admits({f.from_int(5), f.from_int(5)}));
    EXPECT_EQ(pf.substitute(e, {f.from_int(3), f.from_int(5)}), (Matrix<PrimeField>::from_ints(f, {{3, 0}, {0, 5}})));
}

TEST(Families, ParametrizeOneByOne) {
    PrimeField f(5);
    auto p = load_problem(read_problem_file(data("similarity.prob")), f).linear();
    Engine<PrimeField> e(p, StepSequence{{1}});
    std::set<std::string> keys;
    for (long v = 0; v < 5; ++v) {
        auto form = e.canonicalize(Matrix<PrimeField>::from_ints(f, {{v}}));
        keys.insert(family_key(form));
        auto pf = parametrize(e, form);
        EXPECT_EQ(pf.parameter_count(), 1u);
        EXPECT_TRUE(pf.domain.empty());
    }
    EXPECT_EQ(keys.size(), 1u);
}

TEST(Families, ZeroParameterWithoutWeyrBoxes) {
    PrimeField f(3);
    auto sp = load_problem(read_problem_file(data("pair_corner.prob")), f).as_separated();
    Engine<PrimeField> e(separated_to_linear(sp), StepSequence{{2, 2}});
    auto form = e.canonicalize(Matrix<PrimeField>(f, 4, 4));
    for (const auto& b : form.boxes) EXPECT_EQ(b.kind, BoxKind::Zero);
    auto pf = parametrize(e, form);
    EXPECT_EQ(pf.parameter_count(), 0u);
    EXPECT_TRUE(pf.domain.empty());
}

TEST(Families, WorkedExampleParameters) {
    RationalField q;
    auto problem = load("example.prob", q);
    Engine<RationalField> e(problem, StepSequence{{2, 2}});
    auto m = parse_matrix(q, slurp(data("example_matrix.txt")));
    auto form = e.canonicalize(m);
    auto pf = parametrize(e, form);
    EXPECT_FALSE(pf.flagged);
    // eigenvalues 3, -1, 1, 2 are parameters; the zero box at (2,3) is not:
    // a nonzero value there leaves the family
    EXPECT_EQ(pf.parameter_count(), 4u);
    ASSERT_EQ(pf.slots.size(), 5u);
    EXPECT_EQ(pf.slots[0].value, q.from_int(-1));
    EXPECT_EQ(pf.slots[0].positions.size(), 2u);
    EXPECT_FALSE(pf.slots[4].infinite);
    EXPECT_EQ(pf.slots[4].value, q.zero());
    EXPECT_EQ(pf.slots[4].positions, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}}));
    // pairwise distinct parameters, each also distinct from the fixed zero
    std::size_t slot_pairs = 0, constants = 0;
    for (const auto& c : pf.domain) {
        if (c.kind == ConstraintKind::NotEqualSlot) ++slot_pairs;
        if (c.kind == ConstraintKind::NotEqualConstant) {
            ++constants;
            EXPECT_TRUE(c.constant.is_zero()) << c.to_string();
        }
    }
    EXPECT_EQ(slot_pairs, 10u);
    EXPECT_EQ(constants, 4u);
    auto parts = decompose(e, form);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_TRUE(is_indecomposable(e, form));
    EXPECT_EQ(reassemble(parts, form.matrix), form.matrix);
}

TEST(Families, DecomposeSimilarity) {
    PrimeField f(5);
    auto p = load_problem(read_problem_file(data("similarity.prob")), f).linear();
    Engine<PrimeField> e2(p, StepSequence{{2}});
    auto zero = decompose(e2, e2.canonicalize(Matrix<PrimeField>(f, 2, 2)));
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_EQ(zero[0].multiplicity(), 2u);
    EXPECT_EQ(zero[0].n, (StepSequence{{1}}));

    auto diag = decompose(e2, e2.canonicalize(Matrix<PrimeField>::from_ints(f, {{2, 0}, {0, 1}})));
    ASSERT_EQ(diag.size(), 2u);
    EXPECT_EQ(diag[0].multiplicity(), 1u);
    EXPECT_NE(diag[0].matrix, diag[1].matrix);

    Engine<PrimeField> e3(p, StepSequence{{3}});
    auto nil = e3.canonicalize(Matrix<PrimeField>::from_ints(f, {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}));
    auto parts = decompose(e3, nil);
    ASSERT_EQ(parts.size(), 2u);
    std::multiset<std::size_t> sizes;
    for (const auto& s : parts) {
        sizes.insert(s.size());
        EXPECT_TRUE(s.in_space);
    }
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2}));
    EXPECT_EQ(reassemble(parts, nil.matrix), nil.matrix);
    EXPECT_FALSE(is_indecomposable(e3, nil));
    auto jordan = e3.canonicalize(Matrix<PrimeField>::from_ints(f, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
    EXPECT_TRUE(is_indecomposable(e3, jordan));
}

TEST(Families, ParametricSoundnessRandom) {
    PrimeField f(5);
    std::mt19937_64 rng(31);
    struct Case {
        const char* file;
        std::vector<std::size_t> n;
    };
    for (const auto& c : {Case{"example.prob", {1, 1}}, Case{"example.prob", {2, 2}}, Case{"similarity.prob", {3}}}) {
        Engine<PrimeField> e(load(c.file, f), StepSequence{c.n});
        int done = 0;
        for (int trial = 0; trial < 40 && done < 12; ++trial) {
            Matrix<PrimeField> m(f, e.size(), e.size());
            for (const auto& b : e.space().basis()) m += b * f.random(rng);
            try {
                auto pf = parametrize(e, e.canonicalize(m));
                EXPECT_FALSE(pf.flagged) << m.to_string();
                ++done;
            } catch (const Error& err) {
                ASSERT_EQ(err.code(), ErrorCode::NonSplit);
            }
        }
        EXPECT_GT(done, 0);
    }
}
