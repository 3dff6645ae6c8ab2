#include <gtest/gtest.h>

#include <canonform/problem.hpp>

#include <random>

#include "oracles.hpp"

using namespace canonform;

namespace {

std::string data(const std::string& name) { return std::string(CANONFORM_TEST_DATA) + "/" + name; }

template <class F>
LoadedProblem<F> load(const std::string& name, const F& field) {
    return load_problem(read_problem_file(data(name)), field);
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;  // sentinel: nothing thrown
}

}  // namespace

TEST(BasicAlgebra, DualNumbers) {
    RationalField q;
    auto g = BasicAlgebra<RationalField>::validate(
        q, 2, {Matrix<RationalField>::identity(q, 2), Matrix<RationalField>::from_ints(q, {{0, 1}, {0, 0}})});
    EXPECT_EQ(g.r(), 1u);
    EXPECT_EQ(g.classes(), (IndexClasses{{0, 1}}));
    EXPECT_EQ(g.dim(), 2u);
    EXPECT_EQ(g.radical().dim(), 1u);
}

TEST(BasicAlgebra, UpperTriangular) {
    PrimeField f(3);
    auto g = BasicAlgebra<PrimeField>::validate(f, 2,
                                                {Matrix<PrimeField>::from_ints(f, {{1, 0}, {0, 0}}),
                                                 Matrix<PrimeField>::from_ints(f, {{0, 0}, {0, 1}}),
                                                 Matrix<PrimeField>::from_ints(f, {{0, 1}, {0, 0}})});
    EXPECT_EQ(g.classes(), (IndexClasses{{0}, {1}}));
    EXPECT_EQ(format_classes(g.classes()), "{1},{2}");
}

TEST(BasicAlgebra, ValidationErrors) {
    RationalField q;
    using M = Matrix<RationalField>;
    EXPECT_EQ(code_of([&] { BasicAlgebra<RationalField>::validate(q, 2, {M::from_ints(q, {{0, 1}, {0, 0}})}); }),
              ErrorCode::MissingIdentity);
    EXPECT_EQ(code_of([&] {
                  BasicAlgebra<RationalField>::validate(q, 2, {M::identity(q, 2), M::from_ints(q, {{0, 0}, {1, 0}})});
              }),
              ErrorCode::NotTriangular);
    // identity plus e11 + e12: diagonal part e11 is missing
    EXPECT_EQ(code_of([&] {
                  BasicAlgebra<RationalField>::validate(q, 2, {M::identity(q, 2), M::from_ints(q, {{1, 1}, {0, 0}})});
              }),
              ErrorCode::DiagonalProjectionFails);
    // e12, e23 without e13
    auto e = [&](int i, int j) {
        M m(q, 3, 3);
        m(i, j) = q.one();
        return m;
    };
    EXPECT_EQ(code_of([&] { BasicAlgebra<RationalField>::validate(q, 3, {M::identity(q, 3), e(0, 1), e(1, 2)}); }),
              ErrorCode::NotClosedUnderMultiplication);
}

TEST(BasicAlgebra, ProductsStayInSpan) {
    PrimeField f(5);
    for (const char* name : {"example.prob", "a2.prob", "kronecker.prob"}) {
        auto g = load_algebra(read_problem_file(data(name)), f);
        for (const auto& a : g.basis())
            for (const auto& b : g.basis()) EXPECT_TRUE(g.contains(a * b)) << name;
    }
}

TEST(ProblemFile, ParsesExample) {
    auto text = read_problem_file(data("example.prob"));
    EXPECT_EQ(text.field, FieldSpec::rationals());
    EXPECT_EQ(text.t, 2u);
    EXPECT_EQ(text.gamma.size(), 2u);
    EXPECT_EQ(text.space.size(), 4u);
    auto p = load_problem(text, RationalField{});
    EXPECT_FALSE(p.separated());
    EXPECT_EQ(p.gamma.dim(), 2u);
    EXPECT_EQ(p.space.dim(), 4u);
}

TEST(ProblemFile, Errors) {
    EXPECT_EQ(code_of([] { load_problem(read_problem_file(data("bad_triangular.prob")), RationalField{}); }),
              ErrorCode::NotTriangular);
    EXPECT_EQ(code_of([] { load_problem(parse_problem_text("field q\nt 2\ngamma\n1 0 / 0\n"), RationalField{}); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_problem_text("t 1\ngamma\n1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] {
                  load_problem(parse_problem_text("field q\nt 2\nclasses {1},{2}\ngamma\n1 0 / 0 1\n"), RationalField{});
              }),
              ErrorCode::ClassMismatch);
    try {
        parse_problem_text("field q\nt 1\n\nbogus\ngamma\n1\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(ProblemFile, FractionsAndMultilineMatrices) {
    auto text = parse_problem_text("field q\nt 2\ngamma\n1 0\n0 1\n\n0 1/2 / 0 0\n");
    ASSERT_EQ(text.gamma.size(), 2u);
    EXPECT_EQ(text.gamma[1][0][1], "1/2");
}

TEST(ProblemModel, ClosureUnderAction) {
    PrimeField f(3);
    auto g = load_algebra(read_problem_file(data("a2.prob")), f);
    // e21 is not a bimodule over upper triangular matrices
    MatrixSpace<PrimeField> bad(f, 2, 2, {Matrix<PrimeField>::from_ints(f, {{0, 0}, {1, 0}})});
    EXPECT_EQ(code_of([&] { LinearMatrixProblem<PrimeField>::make(g, bad); }), ErrorCode::NotClosedUnderAction);
}

TEST(StepSequenceTest, ParseAndCheck) {
    EXPECT_EQ(StepSequence::parse("(2,2)").sizes, (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(StepSequence::parse("3").sizes, (std::vector<std::size_t>{3}));
    EXPECT_EQ(code_of([] { check_step_sequence({{0, 1}}, StepSequence{{1, 2}}); }), ErrorCode::NotStepSequence);
    EXPECT_NO_THROW(check_step_sequence({{0}, {1}}, StepSequence{{0, 2}}));
}

TEST(GridOrder, BottomStripFirst) {
    auto o = grid_order(2, 2);
    ASSERT_EQ(o.size(), 4u);
    EXPECT_EQ(o[0], (BlockPos{1, 0}));
    EXPECT_EQ(o[1], (BlockPos{1, 1}));
    EXPECT_EQ(o[2], (BlockPos{0, 0}));
    EXPECT_EQ(o[3], (BlockPos{0, 1}));
}

TEST(Inflation, ExampleSpaceIsEverything) {
    auto p = load("example.prob", RationalField{});
    auto inf = inflate(p.linear(), StepSequence{{2, 2}});
    EXPECT_EQ(inf.s(), 16u);
    EXPECT_EQ(inf.dim(), 16u);
    for (const auto& b : inf.free_blocks().blocks) EXPECT_TRUE(b.free);
}

TEST(Inflation, ExampleAlgebraMembership) {
    RationalField q;
    auto p = load("example.prob", q);
    auto alg = inflate_algebra(p.gamma, StepSequence{{2, 2}});
    EXPECT_EQ(alg.s(), 8u);
    // free blocks: A at (2,2) in grid order ... bottom strip: (2,1) zero, (2,2) free, (1,1) = (2,2), (1,2) free
    const auto& blocks = alg.free_blocks().blocks;
    ASSERT_EQ(blocks.size(), 4u);
    EXPECT_FALSE(blocks[0].free);
    EXPECT_TRUE(blocks[0].expression.empty());
    EXPECT_TRUE(blocks[1].free);
    EXPECT_FALSE(blocks[2].free);
    ASSERT_EQ(blocks[2].expression.size(), 1u);
    EXPECT_EQ(blocks[2].expression[0].first, 1u);
    EXPECT_TRUE(blocks[3].free);

    std::mt19937_64 rng(2);
    auto a = oracle::random_matrix(q, 2, 2, rng), b = oracle::random_matrix(q, 2, 2, rng);
    Matrix<RationalField> x(q, 4, 4);
    x.set_block(0, 0, a);
    x.set_block(2, 2, a);
    x.set_block(0, 2, b);
    EXPECT_TRUE(alg.contains(x));
    x(3, 3) += q.one();
    EXPECT_FALSE(alg.contains(x));
    x(3, 3) -= q.one();
    x(2, 0) = q.one();
    EXPECT_FALSE(alg.contains(x));
}

TEST(Inflation, NotStepSequence) {
    auto p = load("example.prob", RationalField{});
    EXPECT_EQ(code_of([&] { inflate(p.linear(), StepSequence{{1, 2}}); }), ErrorCode::NotStepSequence);
}

TEST(Inflation, ReconstructionIsMember) {
    PrimeField f(5);
    std::mt19937_64 rng(9);
    for (const char* name : {"example.prob", "a2.prob", "kronecker.prob"}) {
        auto g = load_algebra(read_problem_file(data(name)), f);
        std::vector<std::size_t> sizes(g.t());
        for (const auto& c : g.classes()) {
            std::size_t k = 1 + rng() % 3;
            for (auto i : c) sizes[i] = k;
        }
        auto alg = inflate_algebra(g, StepSequence{sizes});
        EXPECT_EQ(alg.s(), alg.dim());
        // dimension from block lifts: sum over basis-coordinate pairs of block areas
        MatrixSpace<PrimeField> span(f, alg.rows(), alg.cols(), alg.basis());
        EXPECT_EQ(span.dim(), alg.s()) << name;
        for (int k = 0; k < 20; ++k) {
            Vec<PrimeField> v(alg.s());
            for (auto& x : v) x = f.random(rng);
            auto x = alg.from_free(v);
            EXPECT_TRUE(alg.contains(x));
            EXPECT_EQ(alg.free_values(x), v);
        }
        // the inflated algebra is closed under products
        for (int k = 0; k < 10; ++k) {
            Vec<PrimeField> v(alg.s()), w(alg.s());
            for (auto& x : v) x = f.random(rng);
            for (auto& x : w) x = f.random(rng);
            EXPECT_TRUE(alg.contains(alg.from_free(v) * alg.from_free(w))) << name;
        }
    }
}

TEST(Inflation, ZeroLengthStrips) {
    PrimeField f(3);
    auto g = load_algebra(read_problem_file(data("a2.prob")), f);
    auto alg = inflate_algebra(g, StepSequence{{0, 2}});
    EXPECT_EQ(alg.rows(), 2u);
    EXPECT_EQ(alg.s(), 4u);
    auto empty = inflate_algebra(g, StepSequence{{0, 0}});
    EXPECT_EQ(empty.s(), 0u);
    std::mt19937_64 rng(1);
    auto s = sample_invertible(g, StepSequence{{0, 0}}, rng);
    EXPECT_EQ(s.rows(), 0u);
}

TEST(SampleInvertible, MembershipAndInvertibility) {
    PrimeField f(5);
    std::mt19937_64 rng(1);
    for (const char* name : {"similarity.prob", "example.prob", "kronecker.prob"}) {
        auto g = load_algebra(read_problem_file(data(name)), f);
        std::vector<std::size_t> sizes(g.t(), 2);
        StepSequence n{sizes};
        auto alg = inflate_algebra(g, n);
        InvertibleSampler<PrimeField> sampler(g, n);
        for (int k = 0; k < 20; ++k) {
            auto s = sampler(rng);
            EXPECT_TRUE(alg.contains(s)) << name;
            EXPECT_TRUE(try_inverse(s).has_value()) << name;
        }
    }
}

TEST(Separated, CornerEmbedding) {
    PrimeField f(3);
    auto p = load("pair_corner.prob", f);
    ASSERT_TRUE(p.separated());
    auto lin = p.linear();
    EXPECT_EQ(lin.gamma.t(), 2u);
    EXPECT_EQ(lin.gamma.classes(), (IndexClasses{{0}, {1}}));
    ASSERT_EQ(lin.space.dim(), 1u);
    EXPECT_EQ(lin.space.basis()[0], (Matrix<PrimeField>::from_ints(f, {{0, 1}, {0, 0}})));
}

TEST(Separated, RadicalOfA2) {
    PrimeField f(2);
    auto g = load_algebra(read_problem_file(data("a2.prob")), f);
    auto sp = SeparatedProblem<PrimeField>::make(g, g, g.radical());
    auto lin = separated_to_linear(sp);
    EXPECT_EQ(lin.gamma.t(), 4u);
    EXPECT_EQ(lin.gamma.r(), 4u);
    ASSERT_EQ(lin.space.dim(), 1u);
    Matrix<PrimeField> e(f, 4, 4);
    e(0, 3) = f.one();
    EXPECT_EQ(lin.space.basis()[0], e);
}

TEST(Separated, ConjugationMatchesTwoSidedAction) {
    // N' = C N S for the separated group equals the block conjugation on the embedding
    PrimeField f(3);
    auto g = load_algebra(read_problem_file(data("a2.prob")), f);
    auto sp = SeparatedProblem<PrimeField>::make(g, g, g.radical());
    auto lin = separated_to_linear(sp);
    StepSequence m{{1, 2}}, n{{2, 1}};
    StepSequence mn{{1, 2, 2, 1}};
    auto inf = inflate(lin, mn);
    std::mt19937_64 rng(4);
    InvertibleSampler<PrimeField> sc(g, m), ss(g, n);
    for (int k = 0; k < 20; ++k) {
        Vec<PrimeField> v(inf.s());
        for (auto& x : v) x = f.random(rng);
        auto big = inf.from_free(v);
        auto c = sc(rng), s = ss(rng);
        Matrix<PrimeField> conj(f, 6, 6);
        conj.set_block(0, 0, inverse(c));
        conj.set_block(3, 3, s);
        auto lhs = inverse(conj) * big * conj;
        auto corner = big.block(0, 3, 3, 3);
        EXPECT_EQ(lhs.block(0, 3, 3, 3), c * corner * s);
        EXPECT_TRUE(inf.contains(lhs));
    }
}
