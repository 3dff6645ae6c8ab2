#include <gtest/gtest.h>

#include <canonform/weyr.hpp>

#include <random>

#include "oracles.hpp"

using namespace canonform;

namespace {

// Random matrix with a prescribed Jordan structure, conjugated by a random invertible.
template <class F>
Matrix<F> random_split(const F& field, std::size_t n, std::mt19937_64& rng) {
    Matrix<F> j(field, n, n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t len = 1 + rng() % (n - i);
        auto lambda = field.from_int(static_cast<long long>(rng() % 4) - 1);
        for (std::size_t k = 0; k < len; ++k) {
            j(i + k, i + k) = lambda;
            if (k + 1 < len) j(i + k, i + k + 1) = field.one();
        }
        i += len;
    }
    for (;;) {
        auto p = oracle::random_matrix(field, n, n, rng);
        if (auto inv = try_inverse(p)) return p * j * *inv;
    }
}

template <class F>
void check_weyr(const Matrix<F>& a) {
    auto res = weyr_form(a);
    auto sinv = try_inverse(res.s);
    ASSERT_TRUE(sinv.has_value());
    ASSERT_EQ(*sinv * a * res.s, res.w);
    ASSERT_EQ(res.structure.matrix(a.field()), res.w);
    const std::size_t n = a.rows();
    for (const auto& b : res.structure.blocks) {
        auto id = Matrix<F>::identity(a.field(), n) * b.eigenvalue;
        for (std::size_t j = 1; j <= n; ++j)
            ASSERT_EQ(rank(oracle::power(a - id, j)), rank(oracle::power(res.w - id, j)));
    }
    for (std::size_t k = 1; k < res.structure.blocks.size(); ++k)
        ASSERT_LT(res.structure.blocks[k - 1].eigenvalue, res.structure.blocks[k].eigenvalue);
    auto again = weyr_form(res.w);
    ASSERT_EQ(again.w, res.w);
    ASSERT_EQ(again.s, (Matrix<F>::identity(a.field(), n)));
    ASSERT_EQ(again.structure, res.structure);
}

}  // namespace

TEST(Weyr, FromJordanExamples) {
    RationalField q;
    auto a = weyr_from_jordan<RationalField>({{q.from_int(-1), {2}}});
    EXPECT_EQ(a.blocks[0].partition, (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(a.matrix(q), (Matrix<RationalField>::from_ints(q, {{-1, 1}, {0, -1}})));

    auto b = weyr_from_jordan<RationalField>({{q.from_int(3), {1, 1}}});
    EXPECT_EQ(b.blocks[0].partition, (std::vector<std::size_t>{2}));
    EXPECT_EQ(b.matrix(q), (Matrix<RationalField>::from_ints(q, {{3, 0}, {0, 3}})));

    auto c = weyr_from_jordan<RationalField>({{q.zero(), {2, 1}}});
    EXPECT_EQ(c.blocks[0].partition, (std::vector<std::size_t>{2, 1}));
    auto w = c.matrix(q);
    EXPECT_EQ(rank(w), 1u);
    EXPECT_EQ(rank(w * w), 0u);
    EXPECT_EQ(c.jordan_sizes()[0], (std::vector<std::size_t>{2, 1}));

    try {
        weyr_from_jordan<RationalField>({{q.one(), {1}}, {q.one(), {2}}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateEigenvalue);
    }
}

TEST(Weyr, ConjugatePartitionIsInvolution) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        std::vector<std::size_t> p;
        for (std::size_t i = 0, len = 1 + rng() % 5; i < len; ++i) p.push_back(1 + rng() % 4);
        auto c = conjugate_partition(p);
        std::sort(p.begin(), p.end(), std::greater<>());
        EXPECT_EQ(conjugate_partition(c), p);
    }
}

TEST(Weyr, FormExamples) {
    PrimeField f7(7);
    auto three = Matrix<PrimeField>::from_ints(f7, {{3, 0}, {0, 3}});
    auto r = weyr_form(three);
    EXPECT_EQ(r.w, three);
    EXPECT_EQ(r.s, (Matrix<PrimeField>::identity(f7, 2)));

    PrimeField f5(5);
    auto nil = weyr_form(Matrix<PrimeField>::from_ints(f5, {{0, 0}, {1, 0}}));
    EXPECT_EQ(nil.w, (Matrix<PrimeField>::from_ints(f5, {{0, 1}, {0, 0}})));
    EXPECT_EQ(inverse(nil.s) * Matrix<PrimeField>::from_ints(f5, {{0, 0}, {1, 0}}) * nil.s, nil.w);

    auto d = weyr_form(Matrix<PrimeField>::from_ints(f7, {{2, 0}, {0, 1}}));
    EXPECT_EQ(d.w, (Matrix<PrimeField>::from_ints(f7, {{1, 0}, {0, 2}})));
}

TEST(Weyr, NonSplitPropagates) {
    RationalField q;
    try {
        weyr_form(Matrix<RationalField>::from_ints(q, {{0, 1}, {-1, 0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonSplit);
    }
}

TEST(Weyr, CommutantPartition) {
    RationalField q;
    EXPECT_EQ(commutant_partition(weyr_from_jordan<RationalField>({{q.from_int(3), {1, 1}}})),
              (std::vector<std::size_t>{2}));
    EXPECT_EQ(commutant_partition(weyr_from_jordan<RationalField>({{q.from_int(-1), {2}}})),
              (std::vector<std::size_t>{1, 1}));
    auto st = weyr_from_jordan<RationalField>({{q.zero(), {2, 1}}});
    auto parts = commutant_partition(st);
    EXPECT_EQ(parts, (std::vector<std::size_t>{2, 1}));

    // commutant elements sampled from the Sylvester nullspace are block upper triangular
    auto w = st.matrix(q);
    const std::size_t n = w.rows();
    Matrix<RationalField> sylv(q, n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                // (WX - XW)_{ij} = sum_k W_ik X_kj - X_ik W_kj
                sylv(i * n + j, k * n + j) += w(i, k);
                sylv(i * n + j, i * n + k) -= w(k, j);
            }
    auto ns = nullspace(sylv);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix<RationalField> x(q, n, n);
        for (const auto& v : ns) {
            auto c = q.random(rng);
            for (std::size_t k = 0; k < n * n; ++k) x.data()[k] += c * v[k];
        }
        ASSERT_EQ(w * x, x * w);
        // rows of substrip 2 (index 2) vanish in columns of substrip 1 (indices 0,1)
        EXPECT_TRUE(x(2, 0).is_zero());
        EXPECT_TRUE(x(2, 1).is_zero());
    }
}

TEST(Weyr, RandomSplitMatricesGF7) {
    PrimeField f(7);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) check_weyr(random_split(f, 1 + k % 6, rng));
}

TEST(Weyr, RandomSplitMatricesQ) {
    RationalField q;
    std::mt19937_64 rng(19);
    for (int k = 0; k < 60; ++k) check_weyr(random_split(q, 1 + k % 5, rng));
}
