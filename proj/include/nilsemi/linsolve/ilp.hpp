#ifndef NILSEMI_LINSOLVE_ILP_HPP
#define NILSEMI_LINSOLVE_ILP_HPP

#include "nilsemi/linsolve/hnf.hpp"
#include "nilsemi/linsolve/simplex.hpp"
#include "nilsemi/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nilsemi
{

struct IlpOptions
{
    std::size_t node_budget = 200000;
};

struct IlpStats
{
    std::size_t nodes = 0;
    bool hnf_infeasible = false;
};

/// Upper bound on the entries of some nonnegative integer solution of A x = b, if one exists:
/// n (m a)^{2m+1} with a the largest absolute entry of A and b.
inline BigInt small_solution_bound(const std::vector< IntRow >& A, const IntRow& b, std::size_t n)
{
    BigInt a = 1;
    for (const auto& r : A)
        for (const auto& v : r)
            if (abs(v) > a)
                a = abs(v);
    for (const auto& v : b)
        if (abs(v) > a)
            a = abs(v);
    const unsigned long m = static_cast< unsigned long >(std::max< std::size_t >(A.size(), 1));
    BigInt base = a * m, p;
    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), 2 * m + 1);
    return p * static_cast< unsigned long >(std::max< std::size_t >(n, 1));
}

namespace detail
{
struct IlpNode
{
    std::vector< std::optional< Rational > > lo, hi;
};

// Depth-first over an explicit stack; the floor branch is explored before the ceiling branch.
inline std::optional< IntRow > ilp_branch(const std::vector< IntRow >& A, const IntRow& b, std::size_t n,
                                          std::vector< std::optional< Rational > > lo,
                                          std::vector< std::optional< Rational > > hi, const IlpOptions& opt,
                                          IlpStats& stats)
{
    std::vector< IlpNode > stack;
    stack.push_back({std::move(lo), std::move(hi)});
    while (!stack.empty())
    {
        IlpNode node = std::move(stack.back());
        stack.pop_back();
        if (++stats.nodes > opt.node_budget)
            throw BudgetExceeded("integer feasibility search exceeded its node budget",
                                 "ilp-nodes=" + std::to_string(opt.node_budget));
        LinearProgram lp(n);
        for (std::size_t r = 0; r < A.size(); ++r)
        {
            Row row(n);
            for (std::size_t j = 0; j < n; ++j)
                row[j] = Rational(A[r][j]);
            lp.add_equality(std::move(row), Rational(b[r]));
        }
        lp.lower = node.lo;
        lp.upper = node.hi;
        const auto x = lp_feasible(lp);
        if (!x)
            continue;
        std::size_t j = 0;
        while (j < n && is_integer((*x)[j]))
            ++j;
        if (j == n)
        {
            IntRow out(n);
            for (std::size_t k = 0; k < n; ++k)
                out[k] = (*x)[k].get_num();
            return out;
        }
        IlpNode down = node;
        down.hi[j] = Rational(floor_of((*x)[j]));
        node.lo[j] = Rational(ceil_of((*x)[j]));
        stack.push_back(std::move(node));
        stack.push_back(std::move(down));
    }
    return std::nullopt;
}
} // namespace detail

/// Some x in Z_{>=0}^n with A x = b and, for every group, at least one x_j >= 1 with j in the group.
///
/// Lattice feasibility is checked first through the Hermite form. The search is depth-first branch and
/// bound over the exact LP relaxation inside boxes of growing size, ending with the box given by
/// small_solution_bound, so it terminates; the node budget raises BudgetExceeded.
inline std::optional< IntRow > ilp_feasible_nonneg(const std::vector< IntRow >& A, const IntRow& b, std::size_t n,
                                                   const std::vector< std::vector< std::size_t > >& nonzero_groups = {},
                                                   const IlpOptions& opt = {}, IlpStats* stats_out = nullptr)
{
    IlpStats stats;
    struct Flush
    {
        IlpStats& s;
        IlpStats* out;
        ~Flush()
        {
            if (out)
                *out = s;
        }
    } flush{stats, stats_out};

    if (!hnf_solve(A, b, n))
    {
        stats.hnf_infeasible = true;
        return std::nullopt;
    }
    for (const auto& g : nonzero_groups)
    {
        if (g.empty())
            return std::nullopt;
        for (auto j : g)
            if (j >= n)
                throw PreconditionError("nonzero group index out of range");
    }

    // One representative per group is shifted up by one. Boxes grow geometrically up to the bound, so small
    // solutions are found before the search wanders along unbounded directions of the relaxation.
    std::vector< std::vector< std::size_t > > picks;
    std::vector< std::size_t > pick(nonzero_groups.size(), 0);
    for (;;)
    {
        picks.push_back(pick);
        std::size_t g = 0;
        while (g < pick.size() && ++pick[g] == nonzero_groups[g].size())
            pick[g++] = 0;
        if (g == pick.size())
            break;
    }
    std::vector< BigInt > full(picks.size());
    std::vector< std::vector< std::optional< Rational > > > lows(picks.size());
    for (std::size_t p = 0; p < picks.size(); ++p)
    {
        lows[p].assign(n, Rational(0));
        for (std::size_t g = 0; g < nonzero_groups.size(); ++g)
            lows[p][nonzero_groups[g][picks[p][g]]] = Rational(1);
        IntRow shifted = b;
        for (std::size_t r = 0; r < A.size(); ++r)
            for (std::size_t j = 0; j < n; ++j)
                if (*lows[p][j] != 0)
                    shifted[r] -= A[r][j];
        full[p] = small_solution_bound(A, shifted, n);
    }
    for (BigInt cap = 1;; cap *= 4)
    {
        bool final_stage = true;
        for (std::size_t p = 0; p < picks.size(); ++p)
        {
            const BigInt box = cap < full[p] ? cap : full[p];
            final_stage = final_stage && box == full[p];
            std::vector< std::optional< Rational > > hi(n);
            for (std::size_t j = 0; j < n; ++j)
                hi[j] = *lows[p][j] + Rational(box);
            if (auto x = detail::ilp_branch(A, b, n, lows[p], hi, opt, stats))
                return x;
        }
        if (final_stage)
            return std::nullopt;
    }
}

} // namespace nilsemi

#endif // NILSEMI_LINSOLVE_ILP_HPP
