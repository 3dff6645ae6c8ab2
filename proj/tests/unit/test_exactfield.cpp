#include <gtest/gtest.h>

#include <canonform/linalg.hpp>
#include <canonform/multipoly.hpp>
#include <canonform/poly.hpp>

#include <random>

#include "oracles.hpp"

using namespace canonform;

TEST(Field, PrimeArithmetic) {
    PrimeField f(7);
    EXPECT_EQ(f.from_int(3) + f.from_int(5), f.from_int(1));
    EXPECT_EQ(f.from_int(3).inverse(), f.from_int(5));
    EXPECT_EQ(f.from_int(-1), f.from_int(6));
    EXPECT_EQ(f.parse("3/2"), f.from_int(5));
    EXPECT_THROW(f.zero().inverse(), Error);
}

TEST(Field, RationalArithmetic) {
    RationalField q;
    EXPECT_EQ(q.parse("1/2") + q.parse("1/3"), q.parse("5/6"));
    EXPECT_EQ(q.parse("-4/6").to_string(), "-2/3");
    EXPECT_THROW(q.zero().inverse(), Error);
}

TEST(Field, CompositeModulusRejected) {
    try {
        make_field(FieldSpec::prime(6));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPrimeModulus);
    }
}

TEST(Field, SpecParsing) {
    EXPECT_EQ(FieldSpec::parse("gf 7"), FieldSpec::prime(7));
    EXPECT_EQ(FieldSpec::parse("GF(11)"), FieldSpec::prime(11));
    EXPECT_EQ(FieldSpec::parse("gf2"), FieldSpec::prime(2));
    EXPECT_EQ(FieldSpec::parse("q"), FieldSpec::rationals());
}

template <class F>
void check_axioms(const F& f, std::mt19937_64& rng) {
    for (int k = 0; k < 1000; ++k) {
        auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ(a - a, f.zero());
        if (!a.is_zero()) ASSERT_EQ(a * a.inverse(), f.one());
    }
}

TEST(Field, AxiomsRandomTriples) {
    std::mt19937_64 rng(1);
    check_axioms(PrimeField(7), rng);
    check_axioms(PrimeField(101), rng);
    check_axioms(RationalField{}, rng);
}

TEST(Linalg, RrefBasics) {
    RationalField q;
    auto r = rref(Matrix<RationalField>::identity(q, 3));
    EXPECT_EQ(r.rank, 3u);
    EXPECT_TRUE(r.nullspace.empty());

    auto m = Matrix<RationalField>::from_ints(q, {{1, 2}, {2, 4}});
    auto s = rref(m);
    EXPECT_EQ(s.rank, 1u);
    ASSERT_EQ(s.nullspace.size(), 1u);
    EXPECT_EQ(s.nullspace[0], (Vec<RationalField>{q.from_int(-2), q.from_int(1)}));
}

TEST(Linalg, RandomRankAgainstMinors) {
    PrimeField f(5);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        auto m = oracle::random_matrix(f, 5, 7, rng);
        // force rank deficiency in some draws
        if (k % 3 == 0)
            for (std::size_t j = 0; j < 7; ++j) m(4, j) = m(0, j) + m(1, j) * f.from_int(2);
        auto r = rref(m);
        EXPECT_EQ(r.rank + r.nullspace.size(), 7u);
        EXPECT_EQ(r.rank, oracle::minor_rank(m));
        for (const auto& v : r.nullspace)
            for (const auto& x : mat_vec(m, v)) EXPECT_TRUE(x.is_zero());
        EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
    }
}

TEST(Linalg, InverseAndSolve) {
    RationalField q;
    auto a = Matrix<RationalField>::from_ints(q, {{2, 1}, {1, 1}});
    EXPECT_EQ(a * inverse(a), (Matrix<RationalField>::identity(q, 2)));
    EXPECT_EQ(determinant(a), q.one());
    auto x = solve(a, Vec<RationalField>{q.from_int(3), q.from_int(2)});
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, (Vec<RationalField>{q.one(), q.one()}));
    auto sing = Matrix<RationalField>::from_ints(q, {{1, 2}, {2, 4}});
    EXPECT_FALSE(try_inverse(sing));
    EXPECT_FALSE(solve(sing, Vec<RationalField>{q.one(), q.one()}));
}

TEST(Linalg, SubspaceCosetRepresentative) {
    PrimeField f(5);
    // span{(1,1,0)} with coordinate 1 eliminated first
    Subspace<PrimeField> s(f, 3, {{f.from_int(1), f.from_int(1), f.zero()}}, {1, 0, 2});
    auto r = s.reduce({f.from_int(2), f.from_int(3), f.from_int(4)});
    EXPECT_EQ(r, (Vec<PrimeField>{f.from_int(4), f.zero(), f.from_int(4)}));
    EXPECT_TRUE(s.contains({f.from_int(3), f.from_int(3), f.zero()}));
}

TEST(CharPoly, MatchesLaplaceDeterminant) {
    PrimeField f(101);
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 6; ++n)
        for (int k = 0; k < 5; ++k) {
            auto a = oracle::random_matrix(f, n, n, rng);
            auto chi = characteristic_polynomial(a);
            ASSERT_EQ(chi.degree(), static_cast<int>(n));
            for (std::uint64_t c = 0; c < 10; ++c) {
                auto x = f.element(c * 7);
                auto xi = Matrix<PrimeField>::identity(f, n) * x - a;
                EXPECT_EQ(chi.eval(x), oracle::laplace_det(xi));
            }
        }
}

TEST(CharPoly, SplitExamples) {
    PrimeField f7(7);
    auto ev = split_char_poly(Matrix<PrimeField>::from_ints(f7, {{3, 0}, {0, 3}}));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].first, f7.from_int(3));
    EXPECT_EQ(ev[0].second, 2u);

    RationalField q;
    try {
        split_char_poly(Matrix<RationalField>::from_ints(q, {{0, 1}, {-1, 0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonSplit);
    }

    // companion of (x-1)(x-2)^2 = x^3 - 5x^2 + 8x - 4 over GF(5): x^3 + 3x + 1
    PrimeField f5(5);
    auto comp = Matrix<PrimeField>::from_ints(f5, {{0, 0, 4}, {1, 0, -8}, {0, 1, 5}});
    auto ev5 = split_char_poly(comp);
    ASSERT_EQ(ev5.size(), 2u);
    EXPECT_EQ(ev5[0], std::make_pair(f5.from_int(1), std::size_t{1}));
    EXPECT_EQ(ev5[1], std::make_pair(f5.from_int(2), std::size_t{2}));
}

TEST(CharPoly, RationalRoots) {
    RationalField q;
    auto a = Matrix<RationalField>::from_rows(q, {{q.parse("1/2"), q.one()}, {q.zero(), q.parse("-3/4")}});
    auto ev = split_char_poly(a);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].first, q.parse("-3/4"));
    EXPECT_EQ(ev[1].first, q.parse("1/2"));
}

TEST(CharPoly, SplitRebuildsPolynomial) {
    PrimeField f(7);
    std::mt19937_64 rng(11);
    int split = 0;
    for (int k = 0; k < 200; ++k) {
        auto a = oracle::random_matrix(f, 4, 4, rng);
        Eigenvalues<PrimeField> ev;
        try {
            ev = split_char_poly(a);
        } catch (const Error&) {
            continue;
        }
        ++split;
        auto prod = Poly<PrimeField>::constant(f, f.one());
        for (auto& [l, m] : ev)
            for (std::size_t i = 0; i < m; ++i) prod = prod * Poly<PrimeField>::linear(f, l);
        EXPECT_EQ(prod, characteristic_polynomial(a));
        for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_LT(ev[i - 1].first, ev[i].first);
    }
    EXPECT_GT(split, 10);
}

namespace {

template <class F>
struct XY {
    F f;
    std::vector<std::string> vars{"x", "y"};
    MultiPoly<F> x() const { return MultiPoly<F>::variable(f, vars, 0); }
    MultiPoly<F> y() const { return MultiPoly<F>::variable(f, vars, 1); }
    MultiPoly<F> c(long long v) const { return MultiPoly<F>::constant(f, vars, f.from_int(v)); }
};

}  // namespace

TEST(MultiPoly, GcdExamples) {
    XY<PrimeField> p{PrimeField(7)};
    EXPECT_EQ(multipoly_gcd<PrimeField>({p.x() * p.y(), p.x()}), p.x());
    EXPECT_EQ(multipoly_gcd<PrimeField>({p.x() + p.y(), p.x() - p.y()}), p.c(1));

    XY<PrimeField> q{PrimeField(5)};
    auto a = (q.x() + q.c(1)) * (q.y() + q.c(2));
    auto b = (q.x() + q.c(1)) * (q.y() + q.c(3));
    auto g = multipoly_gcd<PrimeField>({a, b});
    EXPECT_EQ(g, q.x() + q.c(1));
    EXPECT_TRUE(division_remainder(a, g).is_zero());
    EXPECT_TRUE(division_remainder(b, g).is_zero());

    try {
        multipoly_gcd<PrimeField>({p.c(0), p.c(0)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AllZero);
    }
}

TEST(MultiPoly, GcdOfMultiplesIsAssociate) {
    XY<PrimeField> p{PrimeField(11)};
    std::mt19937_64 rng(5);
    auto rand_poly = [&](int deg) {
        MultiPoly<PrimeField> r(p.f, p.vars);
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j)
                r.add_term({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}, p.f.random(rng));
        return r;
    };
    for (int k = 0; k < 60; ++k) {
        auto f = rand_poly(1 + k % 2), g = rand_poly(2), h = rand_poly(1 + k % 3);
        if (f.is_zero() || (g.is_zero() && h.is_zero())) continue;
        auto lhs = multipoly_gcd<PrimeField>({f * g, f * h});
        auto rhs = (f * multipoly_gcd<PrimeField>({g, h})).monic();
        EXPECT_EQ(lhs, rhs) << f.to_string() << " | " << g.to_string() << " | " << h.to_string();
    }
}

TEST(MultiPoly, RationalGcd) {
    XY<RationalField> p{RationalField{}};
    auto f = p.x() * p.x() - p.y();
    auto g = multipoly_gcd<RationalField>({f * (p.x() + p.c(2)), f * (p.y() - p.c(3)) * p.c(5)});
    EXPECT_EQ(g, f.monic());
    EXPECT_EQ(f.eval({p.f.from_int(2), p.f.from_int(4)}), p.f.zero());
}
