#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace nilsemi;

namespace
{
Row R(std::initializer_list< long > v)
{
    Row r;
    for (long x : v)
        r.emplace_back(x);
    return r;
}

IntRow Z(std::initializer_list< long > v)
{
    IntRow r;
    for (long x : v)
        r.emplace_back(x);
    return r;
}

bool satisfies(const std::vector< IntRow >& A, const IntRow& b, const IntRow& x)
{
    for (std::size_t i = 0; i < A.size(); ++i)
    {
        BigInt s = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            s += A[i][j] * x[j];
        if (s != b[i])
            return false;
    }
    return true;
}

bool in_span(const Row& v, const std::vector< Row >& basis, std::size_t n)
{
    std::vector< Row > rows = basis;
    const std::size_t before = rref(rows, n).rows.size();
    rows.push_back(v);
    return rref(rows, n).rows.size() == before;
}
} // namespace

TEST(Nullspace, Examples)
{
    const auto b1 = nullspace({R({1, -1})}, 2);
    ASSERT_EQ(b1.size(), 1u);
    EXPECT_TRUE(in_span(R({1, 1}), b1, 2));
    EXPECT_EQ(nullspace({}, 2).size(), 2u);
    EXPECT_TRUE(nullspace({R({1, 0}), R({0, 1})}, 2).empty());
}

TEST(Eliminate, Examples)
{
    EXPECT_TRUE(eliminate(LinearSubspace({"x", "c"}, {R({1, -1})}), {"x"}).equations().empty());

    const auto two = eliminate(LinearSubspace({"x", "c"}, {R({1, 0}), R({0, 1})}), {"x"});
    ASSERT_EQ(two.equations().size(), 1u);
    EXPECT_FALSE(two.contains(R({1})));
    EXPECT_TRUE(two.contains(R({0})));

    const auto three = eliminate(LinearSubspace({"x", "y", "c"}, {R({1, 1, 0}), R({0, 1, -1})}), {"x", "y"});
    ASSERT_EQ(three.equations().size(), 1u);
    EXPECT_TRUE(three.contains(R({1, -1})));
    EXPECT_FALSE(three.contains(R({1, 1})));
}

TEST(Eliminate, AgreesWithExtensionSearch)
{
    // membership of p in the projection <=> the system in the eliminated coordinates is solvable
    std::mt19937_64 rng(31);
    for (int t = 0; t < 60; ++t)
    {
        std::vector< Row > eqs;
        const long m = testkit::uniform(rng, 1, 3);
        for (long i = 0; i < m; ++i)
            eqs.push_back(R({testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2),
                             testkit::uniform(rng, -2, 2)}));
        const LinearSubspace V({"a", "b", "c", "d"}, eqs);
        const auto P = eliminate(V, {"a", "b"});
        for (long pa = -2; pa <= 2; ++pa)
            for (long pb = -2; pb <= 2; ++pb)
            {
                std::vector< Row > A;
                Row rhs;
                for (const auto& e : eqs)
                {
                    A.push_back({e[2], e[3]});
                    rhs.push_back(-(e[0] * pa + e[1] * pb));
                }
                const bool extendable = solve_particular(A, rhs, 2).has_value();
                EXPECT_EQ(P.contains(R({pa, pb})), extendable);
            }
    }
}

TEST(LpFeasible, Examples)
{
    const auto p = lp_feasible({R({1, 1})}, R({1}), 2, {0, 1});
    ASSERT_TRUE(p);
    EXPECT_EQ((*p)[0] + (*p)[1], 1);
    EXPECT_GE((*p)[0], 0);
    EXPECT_GE((*p)[1], 0);

    EXPECT_FALSE(lp_feasible({R({1})}, R({-1}), 1, {0}));

    const auto q = lp_feasible({R({1, -1})}, R({0}), 2, {}, {{0, Rational(1)}});
    ASSERT_TRUE(q);
    EXPECT_EQ((*q)[0], (*q)[1]);
    EXPECT_GE((*q)[0], 1);
}

TEST(LpFeasible, BoundsOfEveryKind)
{
    LinearProgram lp(3);
    lp.add_equality(R({1, 1, 1}), 0);
    lp.upper[0] = Rational(-2);                       // upper only
    lp.lower[1] = Rational(-1);                       // boxed
    lp.upper[1] = Rational(make_rational(1, 2));      // boxed
    lp.add_at_least(R({0, 0, 1, 0}), Rational(1));    // x2 >= 1 through a slack
    const auto x = lp_feasible(lp);
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)[0] + (*x)[1] + (*x)[2], 0);
    EXPECT_LE((*x)[0], -2);
    EXPECT_GE((*x)[1], -1);
    EXPECT_LE((*x)[1], make_rational(1, 2));
    EXPECT_GE((*x)[2], 1);

    lp.add_at_most(R({0, 0, 1, 0, 0}), Rational(0));
    EXPECT_FALSE(lp_feasible(lp));
}

TEST(SupportNonneg, Examples)
{
    auto support = [](const LinearSubspace& V) {
        std::set< std::size_t > s;
        const auto res = support_nonneg(V);
        for (std::size_t i = 0; i < res.in_support.size(); ++i)
            if (res.in_support[i])
                s.insert(i);
        return s;
    };
    EXPECT_TRUE(support(LinearSubspace({"x", "y"}, {R({1, 1})})).empty());
    EXPECT_EQ(support(LinearSubspace({"x", "y"}, {R({1, -1})})), (std::set< std::size_t >{0, 1}));
    EXPECT_EQ(support(LinearSubspace({"x", "y", "z"}, {R({1, -2, 0})})), (std::set< std::size_t >{0, 1, 2}));
}

TEST(SupportNonneg, MatchesBruteForceAndFullSupportPoint)
{
    std::mt19937_64 rng(32);
    for (int t = 0; t < 60; ++t)
    {
        const std::size_t K = 3;
        std::vector< Row > eqs;
        const long m = testkit::uniform(rng, 1, 2);
        for (long i = 0; i < m; ++i)
            eqs.push_back(R({testkit::uniform(rng, -3, 3), testkit::uniform(rng, -3, 3), testkit::uniform(rng, -3, 3)}));
        const LinearSubspace V({"a", "b", "c"}, eqs);
        const auto res = support_nonneg(V);
        std::vector< bool > brute(K, false);
        for (long a = 0; a <= 20; ++a)
            for (long b = 0; b <= 20; ++b)
                for (long c = 0; c <= 20; ++c)
                    if (V.contains(R({a, b, c})))
                    {
                        brute[0] = brute[0] || a > 0;
                        brute[1] = brute[1] || b > 0;
                        brute[2] = brute[2] || c > 0;
                    }
        EXPECT_EQ(res.in_support, brute);
        Row p;
        for (const auto& v : res.full_support_point)
            p.emplace_back(v);
        EXPECT_TRUE(V.contains(p));
        for (std::size_t i = 0; i < K; ++i)
            EXPECT_EQ(res.full_support_point[i] > 0, res.in_support[i]);

        // dropping an equation never shrinks the support
        const auto wider = support_nonneg(LinearSubspace({"a", "b", "c"}, {eqs.front()}));
        for (std::size_t i = 0; i < K; ++i)
            EXPECT_TRUE(!res.in_support[i] || wider.in_support[i]);
    }
}

TEST(HnfSolve, Examples)
{
    const auto s = hnf_solve({Z({2, 4})}, Z({6}), 2);
    ASSERT_TRUE(s);
    EXPECT_TRUE(satisfies({Z({2, 4})}, Z({6}), s->particular));
    ASSERT_EQ(s->kernel.size(), 1u);
    EXPECT_TRUE(s->kernel[0] == Z({2, -1}) || s->kernel[0] == Z({-2, 1}));

    EXPECT_FALSE(hnf_solve({Z({2})}, Z({1}), 1));

    const auto t = hnf_solve({Z({1, 1})}, Z({0}), 2);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->particular, Z({0, 0}));
    ASSERT_EQ(t->kernel.size(), 1u);
    EXPECT_TRUE(t->kernel[0] == Z({1, -1}) || t->kernel[0] == Z({-1, 1}));
}

TEST(HnfSolve, MatchesBoxSearchOnRandomSystems)
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 25; ++t)
    {
        std::vector< IntRow > A(3, IntRow(4));
        IntRow b(3);
        for (auto& r : A)
            for (auto& v : r)
                v = testkit::uniform(rng, -5, 5);
        // half the systems get a right side with a known solution
        IntRow x0(4);
        for (auto& v : x0)
            v = testkit::uniform(rng, -3, 3);
        for (std::size_t i = 0; i < 3; ++i)
        {
            b[i] = 0;
            for (std::size_t j = 0; j < 4; ++j)
                b[i] += A[i][j] * x0[j];
            if (t % 2)
                b[i] += testkit::uniform(rng, -2, 2);
        }
        const auto sol = hnf_solve(A, b, 4);
        long a64[3][4], b64[3];
        for (std::size_t i = 0; i < 3; ++i)
        {
            b64[i] = b[i].get_si();
            for (std::size_t j = 0; j < 4; ++j)
                a64[i][j] = A[i][j].get_si();
        }
        bool box = false;
        IntRow x(4);
        for (long p = -20; p <= 20 && !box; ++p)
            for (long q = -20; q <= 20 && !box; ++q)
                for (long r = -20; r <= 20 && !box; ++r)
                    for (long s = -20; s <= 20 && !box; ++s)
                    {
                        bool ok = true;
                        for (std::size_t i = 0; i < 3 && ok; ++i)
                            ok = a64[i][0] * p + a64[i][1] * q + a64[i][2] * r + a64[i][3] * s == b64[i];
                        if (ok)
                        {
                            box = true;
                            x = {p, q, r, s};
                        }
                    }
        if (box)
            ASSERT_TRUE(sol);
        if (!sol)
            continue;
        EXPECT_TRUE(satisfies(A, b, sol->particular));
        for (const auto& k : sol->kernel)
            EXPECT_TRUE(satisfies(A, IntRow(3, 0), k));
        // every box solution differs from the particular one by a kernel combination
        if (box)
        {
            Row diff;
            for (std::size_t j = 0; j < 4; ++j)
                diff.emplace_back(x[j] - sol->particular[j]);
            std::vector< Row > kr;
            for (const auto& k : sol->kernel)
            {
                Row r;
                for (const auto& v : k)
                    r.emplace_back(v);
                kr.push_back(r);
            }
            EXPECT_TRUE(kr.empty() ? std::all_of(diff.begin(), diff.end(), [](const Rational& v) { return v == 0; })
                                   : in_span(diff, kr, 4));
        }
    }
}

TEST(IlpFeasible, Examples)
{
    const auto a = ilp_feasible_nonneg({Z({1, 1})}, Z({2}), 2);
    ASSERT_TRUE(a);
    EXPECT_TRUE(satisfies({Z({1, 1})}, Z({2}), *a));
    EXPECT_GE((*a)[0], 0);
    EXPECT_GE((*a)[1], 0);

    const auto b = ilp_feasible_nonneg({Z({1, 1})}, Z({2}), 2, {{0, 1}});
    ASSERT_TRUE(b);
    EXPECT_TRUE((*b)[0] > 0 || (*b)[1] > 0);

    EXPECT_FALSE(ilp_feasible_nonneg({Z({2, 2})}, Z({3}), 2));
}

TEST(IlpFeasible, NonzeroGroupsAndHiddenInfeasibility)
{
    // x - y = 0 has only the zero solution once x = 0 is forced, so the group {0,1} makes it infeasible
    EXPECT_FALSE(ilp_feasible_nonneg({Z({1, -1}), Z({1, 0})}, Z({0, 0}), 2, {{0, 1}}));
    // LP-feasible but lattice-free in the nonnegative orthant: 3x + 5y = 7
    EXPECT_FALSE(ilp_feasible_nonneg({Z({3, 5})}, Z({7}), 2));
    const auto c = ilp_feasible_nonneg({Z({3, 5})}, Z({8}), 2);
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, Z({1, 1}));
}

TEST(ConeIntersectDim, Examples)
{
    auto check_sep = [](const Cone2D& g, const Cone2D& h, const Vec2& n) {
        EXPECT_FALSE(n[0] == 0 && n[1] == 0);
        for (const auto& v : g.generators)
            EXPECT_GE(n[0] * v[0] + n[1] * v[1], 0);
        for (const auto& v : h.generators)
            EXPECT_LE(n[0] * v[0] + n[1] * v[1], 0);
    };
    const Cone2D e1{{Vec2{1, 0}}}, e2{{Vec2{0, 1}}};
    const auto a = cone_intersect_dim(e1, e2);
    EXPECT_EQ(a.dim, 0);
    ASSERT_TRUE(a.separator);
    check_sep(e1, e2, *a.separator);

    const Cone2D quad{{Vec2{1, 0}, Vec2{0, 1}}};
    const auto b = cone_intersect_dim(quad, quad);
    EXPECT_EQ(b.dim, 2);
    ASSERT_TRUE(b.interior);
    EXPECT_GT((*b.interior)[0], 0);
    EXPECT_GT((*b.interior)[1], 0);

    const Cone2D g{{Vec2{1, 1}, Vec2{1, -1}}}, h{{Vec2{1, 1}, Vec2{-1, 1}}};
    const auto c = cone_intersect_dim(g, h);
    EXPECT_EQ(c.dim, 1);
    ASSERT_TRUE(c.separator);
    check_sep(g, h, *c.separator);
    EXPECT_EQ((*c.separator)[0] + (*c.separator)[1], 0);

    const auto z = cone_intersect_dim(Cone2D{{Vec2{0, 0}}}, Cone2D{});
    EXPECT_EQ(z.dim, 0);
    ASSERT_TRUE(z.separator);
    EXPECT_EQ(*z.separator, (Vec2{1, 0}));
}

TEST(ConeIntersectDim, ScalingInvariance)
{
    std::mt19937_64 rng(34);
    for (int t = 0; t < 80; ++t)
    {
        Cone2D g, h, g2, h2;
        for (int i = 0; i < 2; ++i)
        {
            const Vec2 u{testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2)};
            const Vec2 v{testkit::uniform(rng, -2, 2), testkit::uniform(rng, -2, 2)};
            const Rational s = testkit::uniform(rng, 1, 5), r = make_rational(1, testkit::uniform(rng, 1, 5));
            g.generators.push_back(u);
            h.generators.push_back(v);
            g2.generators.push_back({s * u[0], s * u[1]});
            h2.generators.push_back({r * v[0], r * v[1]});
        }
        const auto a = cone_intersect_dim(g, h), b = cone_intersect_dim(g2, h2);
        EXPECT_EQ(a.dim, b.dim);
        EXPECT_EQ(a.separator.has_value(), b.separator.has_value());
        if (a.interior)
        {
            // interior point is a strictly positive combination in both cones
            for (const Cone2D* c : {&g, &h})
            {
                LinearProgram lp(c->generators.size());
                Row r0, r1;
                for (const auto& v : c->generators)
                {
                    r0.push_back(v[0]);
                    r1.push_back(v[1]);
                }
                lp.add_equality(r0, (*a.interior)[0]);
                lp.add_equality(r1, (*a.interior)[1]);
                for (std::size_t k = 0; k < c->generators.size(); ++k)
                    lp.lower[k] = make_rational(1, 1000000);
                EXPECT_TRUE(lp_feasible(lp));
            }
        }
    }
}
