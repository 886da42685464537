#include "support.hpp"

#include <gtest/gtest.h>

using namespace nilsemi;

TEST(FieldArith, Sqrt2Examples)
{
    const auto K = testkit::sqrt2_field();
    const auto r2 = FieldElem::generator(K);
    EXPECT_EQ(r2 * r2, FieldElem::constant(K, 2));
    EXPECT_EQ(FieldElem::one(K) * r2, r2);
    const auto inv = r2.inverse();
    EXPECT_EQ(inv.coords(), (std::vector< Rational >{0, make_rational(1, 2)}));
    EXPECT_EQ(inv * r2, FieldElem::one(K));
    EXPECT_THROW(FieldElem::zero(K).inverse(), PreconditionError);
}

TEST(FieldArith, CubeRootInverse)
{
    std::mt19937_64 rng(21);
    const auto K = testkit::cbrt2_field();
    for (int t = 0; t < 50; ++t)
    {
        const auto a = testkit::random_field_elem(rng, K, 30, 7);
        if (a.is_zero())
            continue;
        EXPECT_EQ(a * a.inverse(), FieldElem::one(K));
    }
}

TEST(RegularRepresentation, Examples)
{
    const auto K = testkit::sqrt2_field();
    EXPECT_EQ(regular_representation(FieldElem::one(K)), Matrix::identity(2));
    // columns (0,1) and (2,0)
    EXPECT_EQ(regular_representation(FieldElem::generator(K)), (Matrix{{0, 2}, {1, 0}}));
}

TEST(RegularRepresentation, RingHomomorphism)
{
    std::mt19937_64 rng(22);
    for (const auto& K : {testkit::sqrt2_field(), testkit::cbrt2_field()})
        for (int t = 0; t < 100; ++t)
        {
            const auto a = testkit::random_field_elem(rng, K, 50, 9);
            const auto b = testkit::random_field_elem(rng, K, 50, 9);
            EXPECT_EQ(regular_representation(a) * regular_representation(b), regular_representation(a * b));
            EXPECT_EQ(regular_representation(a) + regular_representation(b), regular_representation(a + b));
        }
}

TEST(EmbedHeisenberg, Examples)
{
    const auto K = testkit::sqrt2_field();
    EXPECT_EQ(embed_heisenberg(HeisenbergElemK::identity(3, K)), UnipotentMatrix::identity(6));

    const auto z = FieldElem::zero(K);
    const HeisenbergElemK h(3, {FieldElem::generator(K)}, {z}, z);
    const Matrix m = embed_heisenberg(h).matrix();
    const Matrix iota = regular_representation(FieldElem::generator(K));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
        {
            EXPECT_EQ(m(i, 2 + j), iota(i, j));
            EXPECT_EQ(m(2 + i, 4 + j), 0);
            EXPECT_EQ(m(i, 4 + j), 0);
        }
}

TEST(EmbedHeisenberg, MultiplicativeAndTwoStep)
{
    std::mt19937_64 rng(23);
    for (const auto& K : {testkit::sqrt2_field(), testkit::cbrt2_field(), testkit::rational_field()})
        for (std::size_t n : {3, 4})
        {
            std::vector< UnipotentMatrix > gens;
            for (int t = 0; t < 20; ++t)
            {
                const auto h1 = testkit::random_heisenberg(rng, n, K, 20, 5);
                const auto h2 = testkit::random_heisenberg(rng, n, K, 20, 5);
                EXPECT_EQ(embed_heisenberg(h1 * h2), embed_heisenberg(h1) * embed_heisenberg(h2));
                if (t < 4)
                    gens.push_back(embed_heisenberg(h1));
            }
            EXPECT_TRUE(is_two_step(testkit::system_of(gens)));
        }
}

TEST(NumberField, RationalRootDetection)
{
    EXPECT_FALSE(NumberField({-2, 0, 1}).rational_root());
    const auto r = NumberField({-4, 0, 1}).rational_root();
    ASSERT_TRUE(r);
    EXPECT_EQ(*r * *r, 4);
    EXPECT_THROW(NumberField({1, 0, 2}), PreconditionError);
}
