#ifndef NILSEMI_LINSOLVE_HNF_HPP
#define NILSEMI_LINSOLVE_HNF_HPP

#include "nilsemi/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace nilsemi
{

using IntRow = std::vector< BigInt >;

/// Column Hermite form A U = H with U unimodular; H has its nonzero columns first, in echelon shape.
struct HermiteForm
{
    std::vector< IntRow > H; // m x n
    std::vector< IntRow > U; // n x n
    std::vector< std::size_t > pivot_row; // pivot_row[k]: row of the pivot in column k, for k < rank
    std::size_t rank = 0;
};

inline HermiteForm column_hermite(const std::vector< IntRow >& A, std::size_t n)
{
    const std::size_t m = A.size();
    HermiteForm f;
    f.H = A;
    for (const auto& r : f.H)
        if (r.size() != n)
            throw PreconditionError("column_hermite: inconsistent row length");
    f.U.assign(n, IntRow(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        f.U[i][i] = 1;
    auto& H = f.H;
    auto& U = f.U;

    // new col p = s col p + t col q ; new col q = u col p + v col q
    auto combine = [&](std::size_t p, std::size_t q, const BigInt& s, const BigInt& t, const BigInt& u, const BigInt& v) {
        auto apply = [&](std::vector< IntRow >& M) {
            for (auto& row : M)
            {
                BigInt a = row[p], b = row[q];
                row[p] = s * a + t * b;
                row[q] = u * a + v * b;
            }
        };
        apply(H);
        apply(U);
    };
    auto add_multiple = [&](std::size_t target, std::size_t source, const BigInt& k) {
        for (auto& row : H)
            row[target] -= k * row[source];
        for (auto& row : U)
            row[target] -= k * row[source];
    };

    std::size_t p = 0;
    for (std::size_t i = 0; i < m && p < n; ++i)
    {
        for (std::size_t q = p + 1; q < n; ++q)
        {
            if (H[i][q] == 0)
                continue;
            if (H[i][p] == 0)
            {
                combine(p, q, 0, 1, 1, 0);
                continue;
            }
            const BigInt a = H[i][p], b = H[i][q];
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            combine(p, q, s, t, BigInt(-b / g), BigInt(a / g));
        }
        if (H[i][p] == 0)
            continue;
        if (H[i][p] < 0)
        {
            for (auto& row : H)
                row[p] = -row[p];
            for (auto& row : U)
                row[p] = -row[p];
        }
        // reduce entries left of the pivot into [0, pivot)
        for (std::size_t k = 0; k < p; ++k)
        {
            BigInt q;
            mpz_fdiv_q(q.get_mpz_t(), H[i][k].get_mpz_t(), H[i][p].get_mpz_t());
            if (q != 0)
                add_multiple(k, p, q);
        }
        f.pivot_row.push_back(i);
        ++p;
    }
    f.rank = p;
    return f;
}

/// All integer solutions of A x = b: particular + Z-span of the kernel basis.
struct IntegerSolutionSet
{
    IntRow particular;
    std::vector< IntRow > kernel;
};

inline std::optional< IntegerSolutionSet > hnf_solve(const std::vector< IntRow >& A, const IntRow& b, std::size_t n)
{
    if (A.size() != b.size())
        throw PreconditionError("hnf_solve: row count differs from rhs length");
    const HermiteForm f = column_hermite(A, n);
    const std::size_t m = A.size();
    IntRow z(n, 0);
    std::size_t k = 0; // next pivot column
    for (std::size_t i = 0; i < m; ++i)
    {
        BigInt residual = b[i];
        for (std::size_t c = 0; c < k; ++c)
            residual -= f.H[i][c] * z[c];
        if (k < f.rank && f.pivot_row[k] == i)
        {
            if (!mpz_divisible_p(residual.get_mpz_t(), f.H[i][k].get_mpz_t()))
                return std::nullopt;
            z[k] = residual / f.H[i][k];
            ++k;
        }
        else if (residual != 0)
            return std::nullopt;
    }
    IntegerSolutionSet out;
    out.particular.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < f.rank; ++c)
            if (z[c] != 0)
                out.particular[r] += f.U[r][c] * z[c];
    for (std::size_t c = f.rank; c < n; ++c)
    {
        IntRow v(n);
        for (std::size_t r = 0; r < n; ++r)
            v[r] = f.U[r][c];
        out.kernel.push_back(std::move(v));
    }
    return out;
}

} // namespace nilsemi

#endif // NILSEMI_LINSOLVE_HNF_HPP
