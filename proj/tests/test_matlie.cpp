#include "support.hpp"

#include <gtest/gtest.h>

using namespace nilsemi;

namespace
{
const UnipotentMatrix x = h3(1, 0, 0);
const UnipotentMatrix y = h3(0, 1, 0);

Matrix unit(std::size_t n, std::size_t i, std::size_t j)
{
    Matrix m(n, n);
    m(i, j) = 1;
    return m;
}
} // namespace

TEST(CheckUnipotent, Examples)
{
    EXPECT_TRUE(check_unipotent(Matrix::identity(3)));
    Matrix lower = Matrix::identity(3);
    lower(1, 0) = 1;
    EXPECT_FALSE(check_unipotent(lower));
    EXPECT_TRUE(check_unipotent(h3(1, 1, 1).matrix()));
    Matrix diag = Matrix::identity(3);
    diag(2, 2) = 2;
    EXPECT_FALSE(check_unipotent(diag));
    EXPECT_THROW(UnipotentMatrix{lower}, PreconditionError);
}

TEST(LogUnipotent, Examples)
{
    EXPECT_TRUE(log_unipotent(UnipotentMatrix::identity(3)).is_zero());
    EXPECT_EQ(log_unipotent(h3(1, 0, 0)), h3_lie(1, 0, 0));
    EXPECT_EQ(log_unipotent(h3(1, 1, 1)), h3_lie(1, 1, make_rational(1, 2)));
}

TEST(ExpNilpotent, Examples)
{
    EXPECT_EQ(exp_nilpotent(NilpotentMatrix::zero(3)), UnipotentMatrix::identity(3));
    EXPECT_EQ(exp_nilpotent(h3_lie(1, 0, 0)), h3(1, 0, 0));
    EXPECT_EQ(exp_nilpotent(h3_lie(1, 1, make_rational(1, 2))), h3(1, 1, 1));
}

TEST(Bracket, Examples)
{
    const NilpotentMatrix X = log_unipotent(x), Y = log_unipotent(y);
    EXPECT_TRUE(bracket(X, X).is_zero());
    EXPECT_EQ(bracket(X, Y), h3_lie(0, 0, 1));
    EXPECT_EQ(bracket(Y, X), h3_lie(0, 0, -1));
}

TEST(Bracket, BilinearAndAntisymmetric)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t)
    {
        const std::size_t n = 3 + t % 3;
        const auto X = testkit::random_nilpotent(rng, n, 20, 9);
        const auto Y = testkit::random_nilpotent(rng, n, 20, 9);
        const auto Z = testkit::random_nilpotent(rng, n, 20, 9);
        const Rational a = testkit::random_rational(rng, 10, 7);
        EXPECT_EQ(bracket(X, Y), -bracket(Y, X));
        EXPECT_EQ(bracket(a * X + Z, Y), a * bracket(X, Y) + bracket(Z, Y));
    }
}

TEST(Bracket, H3VanishesExactlyOnDependentPairs)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t)
    {
        const auto X = h3_lie(testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2), testkit::uniform(rng, -3, 3));
        const auto Y = h3_lie(testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2), testkit::uniform(rng, -3, 3));
        const bool dependent = X(0, 1) * Y(1, 2) - X(1, 2) * Y(0, 1) == 0;
        EXPECT_EQ(bracket(X, Y).is_zero(), dependent);
    }
}

TEST(IsTwoStep, Examples)
{
    EXPECT_TRUE(is_two_step(testkit::system_of({x, y, inverse(x), h3(2, -1, 5)})));
    EXPECT_TRUE(is_two_step(testkit::system_of({h3(1, 2, 3)})));
    const Matrix I4 = Matrix::identity(4);
    const auto g1 = UnipotentMatrix(I4 + unit(4, 0, 1));
    const auto g2 = UnipotentMatrix(I4 + unit(4, 1, 2));
    const auto g3 = UnipotentMatrix(I4 + unit(4, 2, 3));
    EXPECT_FALSE(is_two_step(testkit::system_of({g1, g2, g3})));
    const auto c = commutator(commutator(g1, g2), g3);
    EXPECT_NE(c(0, 3), 0);
}

TEST(BchLog, Examples)
{
    const auto G = testkit::system_of({x, y});
    ParikhVector e1{{1, 0}};
    EXPECT_EQ(bch_log(G, e1, DeltaTable(2)), G.log(0));

    ParikhVector both{{1, 1}};
    DeltaTable d(2);
    d.at(0, 1) = 1;
    EXPECT_EQ(bch_log(G, both, d), log_unipotent(x * y));
    EXPECT_EQ(bch_log(G, both, d), h3_lie(1, 1, make_rational(1, 2)));
    d.at(0, 1) = -1;
    EXPECT_EQ(bch_log(G, both, d), log_unipotent(y * x));
    EXPECT_EQ(bch_log(G, both, d), h3_lie(1, 1, make_rational(-1, 2)));
}

TEST(BchLog, AgreesWithProductsOnShortWords)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 150; ++t)
    {
        const std::size_t K = 1 + t % 3;
        std::vector< UnipotentMatrix > gens;
        for (std::size_t i = 0; i < K; ++i)
            gens.push_back(h3(testkit::random_rational(rng, 9, 5), testkit::random_rational(rng, 9, 5),
                              testkit::random_rational(rng, 9, 5)));
        const auto G = testkit::system_of(gens);
        const auto w = testkit::random_word(rng, K, static_cast< std::size_t >(testkit::uniform(rng, 0, 8)));
        EXPECT_EQ(log_unipotent(product_of_word(G, w)), bch_log(G, parikh(w), delta_table(w), true));
    }
}

TEST(ProductOfWord, Examples)
{
    const auto G = testkit::system_of({x, y});
    EXPECT_EQ(product_of_word(G, WitnessWord(2)), UnipotentMatrix::identity(3));
    const std::vector< std::size_t > one{0}, two{0, 1};
    EXPECT_EQ(product_of_word(G, WitnessWord::from_letters(2, one)), x);
    EXPECT_EQ(product_of_word(G, WitnessWord::from_letters(2, two)), h3(1, 1, 1));
}

TEST(ProductOfWord, RunLengthPowersMatchRepeatedMultiplication)
{
    const auto G = testkit::system_of({h3(1, 2, 3), h3(-1, 0, 1)});
    WitnessWord w(2);
    w.append(0, 5);
    w.append(1, 3);
    UnipotentMatrix expect = UnipotentMatrix::identity(3);
    for (int i = 0; i < 5; ++i)
        expect = expect * G.generator(0);
    for (int i = 0; i < 3; ++i)
        expect = expect * G.generator(1);
    EXPECT_EQ(product_of_word(G, w), expect);
    EXPECT_EQ(power(G.generator(0), -2) * power(G.generator(0), 2), UnipotentMatrix::identity(3));
}

TEST(LogExp, InverseOnRandomInputs)
{
    std::mt19937_64 rng(14);
    for (std::size_t n = 2; n <= 6; ++n)
        for (int t = 0; t < 40; ++t)
        {
            const auto M = testkit::random_unipotent(rng, n, 100, 100);
            EXPECT_EQ(exp_nilpotent(log_unipotent(M)), M);
            const auto X = testkit::random_nilpotent(rng, n, 100, 100);
            EXPECT_EQ(log_unipotent(exp_nilpotent(X)), X);
        }
}
