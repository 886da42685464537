#ifndef NILSEMI_LINSOLVE_SIMPLEX_HPP
#define NILSEMI_LINSOLVE_SIMPLEX_HPP

#include "nilsemi/linsolve/linear.hpp"
#include "nilsemi/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace nilsemi
{

/// Feasibility problem: rows . x = rhs, with optional per-variable lower and upper bounds.
struct LinearProgram
{
    std::size_t num_vars = 0;
    std::vector< Row > rows;
    Row rhs;
    std::vector< std::optional< Rational > > lower;
    std::vector< std::optional< Rational > > upper;

    explicit LinearProgram(std::size_t n = 0) : num_vars(n), lower(n), upper(n) {}

    std::size_t add_var(std::optional< Rational > lo = std::nullopt, std::optional< Rational > hi = std::nullopt)
    {
        for (auto& r : rows)
            r.emplace_back(0);
        lower.push_back(std::move(lo));
        upper.push_back(std::move(hi));
        return num_vars++;
    }

    void add_equality(Row coeffs, Rational value)
    {
        if (coeffs.size() != num_vars)
            throw PreconditionError("constraint length differs from the number of variables");
        rows.push_back(std::move(coeffs));
        rhs.push_back(std::move(value));
    }

    /// coeffs . x >= value, through a fresh nonnegative slack.
    void add_at_least(Row coeffs, Rational value)
    {
        const std::size_t s = add_var(Rational(0));
        coeffs.resize(num_vars);
        coeffs[s] = -1;
        add_equality(std::move(coeffs), std::move(value));
    }

    /// coeffs . x <= value, through a fresh nonnegative slack.
    void add_at_most(Row coeffs, Rational value)
    {
        const std::size_t s = add_var(Rational(0));
        coeffs.resize(num_vars);
        coeffs[s] = 1;
        add_equality(std::move(coeffs), std::move(value));
    }
};

namespace detail
{
// Phase-one simplex on A u = b, u >= 0, b >= 0, with artificial columns. Bland's rule throughout.
class PhaseOne
{
  public:
    PhaseOne(const std::vector< Row >& A, const Row& b, std::size_t n) : m_(A.size()), n_(n), width_(n + A.size() + 1)
    {
        tab_.assign(m_ * width_, Rational(0));
        obj_.assign(width_, Rational(0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i)
        {
            const bool flip = b[i] < 0;
            for (std::size_t j = 0; j < n_; ++j)
                at(i, j) = flip ? Rational(-A[i][j]) : A[i][j];
            at(i, n_ + i) = 1;
            at(i, width_ - 1) = flip ? Rational(-b[i]) : b[i];
            basis_[i] = n_ + i;
            for (std::size_t j = 0; j < n_; ++j)
                obj_[j] -= at(i, j);
            obj_[width_ - 1] -= at(i, width_ - 1);
        }
    }

    bool run()
    {
        for (;;)
        {
            std::size_t enter = width_;
            for (std::size_t j = 0; j + 1 < width_; ++j)
                if (obj_[j] < 0)
                {
                    enter = j;
                    break;
                }
            if (enter == width_)
                break;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i)
            {
                if (at(i, enter) <= 0)
                    continue;
                Rational ratio = at(i, width_ - 1) / at(i, enter);
                if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave]))
                {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == m_)
                throw InternalError("phase-one simplex reported an unbounded direction");
            pivot(leave, enter);
        }
        return obj_[width_ - 1] == 0;
    }

    Row solution() const
    {
        Row u(n_);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_)
                u[basis_[i]] = at(i, width_ - 1);
        return u;
    }

  private:
    Rational& at(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return tab_[i * width_ + j]; }

    void pivot(std::size_t r, std::size_t c)
    {
        const Rational inv = 1 / at(r, c);
        for (std::size_t j = 0; j < width_; ++j)
            if (at(r, j) != 0)
                at(r, j) *= inv;
        for (std::size_t i = 0; i < m_; ++i)
        {
            if (i == r || at(i, c) == 0)
                continue;
            const Rational f = at(i, c);
            for (std::size_t j = 0; j < width_; ++j)
                if (at(r, j) != 0)
                    at(i, j) -= f * at(r, j);
        }
        if (obj_[c] != 0)
        {
            const Rational f = obj_[c];
            for (std::size_t j = 0; j < width_; ++j)
                if (at(r, j) != 0)
                    obj_[j] -= f * at(r, j);
        }
        basis_[r] = c;
    }

    std::size_t m_, n_, width_;
    std::vector< Rational > tab_;
    std::vector< Rational > obj_;
    std::vector< std::size_t > basis_;
};
} // namespace detail

/// A feasible point of `lp`, or nullopt when the polyhedron is empty. Exact simplex, phase one only.
inline std::optional< Row > lp_feasible(const LinearProgram& lp)
{
    const std::size_t n = lp.num_vars;
    if (lp.lower.size() != n || lp.upper.size() != n || lp.rows.size() != lp.rhs.size())
        throw PreconditionError("malformed linear program");
    for (std::size_t i = 0; i < n; ++i)
        if (lp.lower[i] && lp.upper[i] && *lp.lower[i] > *lp.upper[i])
            return std::nullopt;

    // x_i = offset_i + sign_i * u_{col_i} (- u_{col_i + 1} when free)
    enum class Kind { Lower, Upper, Free };
    std::vector< Kind > kind(n);
    std::vector< std::size_t > col(n);
    std::size_t cols = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        col[i] = cols;
        if (lp.lower[i])
            kind[i] = Kind::Lower, cols += 1;
        else if (lp.upper[i])
            kind[i] = Kind::Upper, cols += 1;
        else
            kind[i] = Kind::Free, cols += 2;
    }
    std::vector< std::size_t > box; // variables with both bounds need a slack row
    for (std::size_t i = 0; i < n; ++i)
        if (lp.lower[i] && lp.upper[i])
            box.push_back(i);
    const std::size_t total = cols + box.size();

    std::vector< Row > A;
    Row b;
    for (std::size_t r = 0; r < lp.rows.size(); ++r)
    {
        Row row(total);
        Rational rhs = lp.rhs[r];
        for (std::size_t i = 0; i < n; ++i)
        {
            const Rational& a = lp.rows[r][i];
            if (a == 0)
                continue;
            switch (kind[i])
            {
            case Kind::Lower:
                rhs -= a * *lp.lower[i];
                row[col[i]] += a;
                break;
            case Kind::Upper:
                rhs -= a * *lp.upper[i];
                row[col[i]] -= a;
                break;
            case Kind::Free:
                row[col[i]] += a;
                row[col[i] + 1] -= a;
                break;
            }
        }
        A.push_back(std::move(row));
        b.push_back(std::move(rhs));
    }
    for (std::size_t k = 0; k < box.size(); ++k)
    {
        const std::size_t i = box[k];
        Row row(total);
        row[col[i]] = 1;
        row[cols + k] = 1;
        A.push_back(std::move(row));
        b.push_back(*lp.upper[i] - *lp.lower[i]);
    }

    detail::PhaseOne simplex(A, b, total);
    if (!simplex.run())
        return std::nullopt;
    const Row u = simplex.solution();
    Row x(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        switch (kind[i])
        {
        case Kind::Lower: x[i] = *lp.lower[i] + u[col[i]]; break;
        case Kind::Upper: x[i] = *lp.upper[i] - u[col[i]]; break;
        case Kind::Free: x[i] = u[col[i]] - u[col[i] + 1]; break;
        }
    }
    return x;
}

/// Convenience form: equalities, a set of nonnegative variables, and extra lower bounds x_i >= value.
inline std::optional< Row > lp_feasible(const std::vector< Row >& rows, const Row& rhs, std::size_t num_vars,
                                        const std::vector< std::size_t >& nonneg,
                                        const std::map< std::size_t, Rational >& lower = {})
{
    LinearProgram lp(num_vars);
    for (std::size_t r = 0; r < rows.size(); ++r)
        lp.add_equality(rows[r], rhs.at(r));
    for (auto i : nonneg)
        lp.lower.at(i) = Rational(0);
    for (const auto& [i, v] : lower)
        if (!lp.lower.at(i) || *lp.lower[i] < v)
            lp.lower[i] = v;
    return lp_feasible(lp);
}

/// Outcome of the per-coordinate support computation for V cap Q_{>=0}^n.
struct SupportResult
{
    std::vector< bool > in_support;
    /// Integer points of V cap Z_{>=0}^n, each positive on at least one new coordinate.
    std::vector< std::vector< BigInt > > certificates;
    /// Sum of the certificates: an integer point of V, nonnegative, positive exactly on the support.
    std::vector< BigInt > full_support_point;
    std::size_t lp_calls = 0;
};

/// Coordinates i for which some x in V with x >= 0 has x_i > 0. One LP {x in V, x >= 0, x_i >= 1} per
/// coordinate not already covered by an earlier certificate.
inline SupportResult support_nonneg(const LinearSubspace& space)
{
    const std::size_t n = space.coords().size();
    SupportResult out;
    out.in_support.assign(n, false);
    out.full_support_point.assign(n, 0);
    std::vector< bool > decided(n, false);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (decided[i])
            continue;
        LinearProgram lp(n);
        for (const auto& eq : space.equations())
            lp.add_equality(eq, 0);
        for (std::size_t k = 0; k < n; ++k)
            lp.lower[k] = Rational(0);
        lp.lower[i] = Rational(1);
        ++out.lp_calls;
        const auto x = lp_feasible(lp);
        decided[i] = true;
        if (!x)
            continue;
        auto cert = clear_denominators(*x);
        for (std::size_t k = 0; k < n; ++k)
            if (cert[k] > 0)
            {
                out.in_support[k] = true;
                decided[k] = true;
                out.full_support_point[k] += cert[k];
            }
        out.certificates.push_back(std::move(cert));
    }
    return out;
}

} // namespace nilsemi

#endif // NILSEMI_LINSOLVE_SIMPLEX_HPP
