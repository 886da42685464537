#ifndef NILSEMI_LINSOLVE_CONE_HPP
#define NILSEMI_LINSOLVE_CONE_HPP

#include "nilsemi/linsolve/simplex.hpp"
#include "nilsemi/rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace nilsemi
{

using Vec2 = std::array< Rational, 2 >;

/// Finitely generated cone in Q^2.
struct Cone2D
{
    std::vector< Vec2 > generators;

    int dimension() const
    {
        std::vector< Vec2 > nz;
        for (const auto& g : generators)
            if (g[0] != 0 || g[1] != 0)
                nz.push_back(g);
        if (nz.empty())
            return 0;
        for (const auto& g : nz)
            if (nz.front()[0] * g[1] - nz.front()[1] * g[0] != 0)
                return 2;
        return 1;
    }
};

struct ConeIntersection
{
    int dim = 0;
    /// Set when dim == 2: a point with strictly positive coefficients in both cones.
    std::optional< Vec2 > interior;
    /// Set when dim <= 1: n != 0 with n.g >= 0 on the first cone and n.h <= 0 on the second.
    std::optional< Vec2 > separator;
};

namespace detail
{
// Variables lambda (first k1) and mu (next k2) with sum lambda g = sum mu h.
inline LinearProgram cone_meet_program(const Cone2D& g, const Cone2D& h, const Rational& min_coeff)
{
    const std::size_t k1 = g.generators.size(), k2 = h.generators.size();
    LinearProgram lp(k1 + k2);
    for (std::size_t c = 0; c < 2; ++c)
    {
        Row row(k1 + k2);
        for (std::size_t i = 0; i < k1; ++i)
            row[i] = g.generators[i][c];
        for (std::size_t j = 0; j < k2; ++j)
            row[k1 + j] = -h.generators[j][c];
        lp.add_equality(std::move(row), 0);
    }
    for (std::size_t i = 0; i < k1 + k2; ++i)
        lp.lower[i] = min_coeff;
    return lp;
}

inline Vec2 combination(const Cone2D& g, const Row& x)
{
    Vec2 v{Rational(0), Rational(0)};
    for (std::size_t i = 0; i < g.generators.size(); ++i)
        for (std::size_t c = 0; c < 2; ++c)
            v[c] += x[i] * g.generators[i][c];
    return v;
}
} // namespace detail

/// Dimension of cone(g) cap cone(h) in Q^2, with an interior point or a separating functional.
inline ConeIntersection cone_intersect_dim(const Cone2D& g, const Cone2D& h)
{
    ConeIntersection out;
    const std::size_t k1 = g.generators.size();
    if (g.dimension() == 0 && h.dimension() == 0)
    {
        out.separator = Vec2{Rational(1), Rational(0)};
        return out;
    }
    if (g.dimension() == 2 && h.dimension() == 2)
    {
        if (auto x = lp_feasible(detail::cone_meet_program(g, h, 1)))
        {
            out.dim = 2;
            out.interior = detail::combination(g, *x);
            return out;
        }
    }
    // nonzero common ray: some coordinate of the common point is >= 1 or <= -1
    for (std::size_t c = 0; c < 2 && out.dim == 0; ++c)
        for (int s : {1, -1})
        {
            LinearProgram lp = detail::cone_meet_program(g, h, 0);
            Row row(lp.num_vars);
            for (std::size_t i = 0; i < k1; ++i)
                row[i] = s * g.generators[i][c];
            lp.add_at_least(std::move(row), 1);
            if (lp_feasible(lp))
            {
                out.dim = 1;
                break;
            }
        }
    for (std::size_t c = 0; c < 2; ++c)
        for (int s : {1, -1})
        {
            LinearProgram lp(2);
            for (const auto& v : g.generators)
                lp.add_at_least(Row{v[0], v[1]}, 0);
            for (const auto& v : h.generators)
                lp.add_at_most(Row{v[0], v[1]}, 0);
            if (s > 0)
                lp.lower[c] = Rational(1);
            else
                lp.upper[c] = Rational(-1);
            if (auto n = lp_feasible(lp))
            {
                out.separator = Vec2{(*n)[0], (*n)[1]};
                return out;
            }
        }
    return out;
}

} // namespace nilsemi

#endif // NILSEMI_LINSOLVE_CONE_HPP
