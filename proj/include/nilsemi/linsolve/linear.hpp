#ifndef NILSEMI_LINSOLVE_LINEAR_HPP
#define NILSEMI_LINSOLVE_LINEAR_HPP

#include "nilsemi/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilsemi
{

using Row = std::vector< Rational >;

/// Reduced row echelon form of a row list; zero rows are dropped.
struct Echelon
{
    std::vector< Row > rows;
    std::vector< std::size_t > pivots; // pivot column of each row
};

inline Echelon rref(std::vector< Row > rows, std::size_t ncols)
{
    for (const auto& r : rows)
        if (r.size() != ncols)
            throw PreconditionError("rref: inconsistent row length");
    Echelon out;
    std::size_t top = 0;
    for (std::size_t col = 0; col < ncols && top < rows.size(); ++col)
    {
        std::size_t piv = top;
        while (piv < rows.size() && rows[piv][col] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[top], rows[piv]);
        const Rational inv = 1 / rows[top][col];
        for (auto& v : rows[top])
            v *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
            if (r == top || rows[r][col] == 0)
                continue;
            const Rational f = rows[r][col];
            for (std::size_t k = col; k < ncols; ++k)
                if (rows[top][k] != 0)
                    rows[r][k] -= f * rows[top][k];
        }
        out.pivots.push_back(col);
        ++top;
    }
    rows.resize(top);
    out.rows = std::move(rows);
    return out;
}

/// Basis of {x : rows . x = 0}, one vector per free column.
inline std::vector< Row > nullspace(const std::vector< Row >& rows, std::size_t ncols)
{
    const Echelon e = rref(rows, ncols);
    std::vector< bool > is_pivot(ncols, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector< Row > basis;
    for (std::size_t f = 0; f < ncols; ++f)
    {
        if (is_pivot[f])
            continue;
        Row v(ncols);
        v[f] = 1;
        for (std::size_t r = 0; r < e.rows.size(); ++r)
            v[e.pivots[r]] = -e.rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some x with A x = b, or nullopt when inconsistent.
inline std::optional< Row > solve_particular(const std::vector< Row >& A, const Row& b, std::size_t ncols)
{
    if (A.size() != b.size())
        throw PreconditionError("solve_particular: row count differs from rhs length");
    std::vector< Row > aug;
    aug.reserve(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
    {
        Row r = A[i];
        r.push_back(b[i]);
        aug.push_back(std::move(r));
    }
    const Echelon e = rref(std::move(aug), ncols + 1);
    Row x(ncols);
    for (std::size_t r = 0; r < e.rows.size(); ++r)
    {
        if (e.pivots[r] == ncols)
            return std::nullopt;
        x[e.pivots[r]] = e.rows[r][ncols];
    }
    return x;
}

inline Rational dot(const Row& a, const Row& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            s += a[i] * b[i];
    return s;
}

/// Q-linear subspace over named coordinates, given by homogeneous equations row . x = 0.
class LinearSubspace
{
  public:
    LinearSubspace() = default;
    LinearSubspace(std::vector< std::string > coords, std::vector< Row > equations)
        : coords_(std::move(coords)), equations_(std::move(equations))
    {
        for (const auto& r : equations_)
            if (r.size() != coords_.size())
                throw PreconditionError("equation length differs from the number of coordinates");
    }

    const std::vector< std::string >& coords() const noexcept { return coords_; }
    const std::vector< Row >& equations() const noexcept { return equations_; }
    std::size_t dimension_of_ambient() const noexcept { return coords_.size(); }

    /// Basis of the solution set (computed on demand).
    std::vector< Row > basis() const { return nullspace(equations_, coords_.size()); }

    bool contains(const Row& x) const
    {
        if (x.size() != coords_.size())
            throw PreconditionError("point dimension differs from the subspace ambient dimension");
        return std::all_of(equations_.begin(), equations_.end(), [&](const Row& r) { return dot(r, x) == 0; });
    }

    std::optional< std::size_t > index_of(const std::string& name) const
    {
        const auto it = std::find(coords_.begin(), coords_.end(), name);
        if (it == coords_.end())
            return std::nullopt;
        return static_cast< std::size_t >(it - coords_.begin());
    }

  private:
    std::vector< std::string > coords_;
    std::vector< Row > equations_;
};

/// Projection of `space` onto the coordinates `keep` (in that order), again as homogeneous equations.
///
/// Columns to be eliminated go first; after reduction, rows whose pivot lies in a kept column have no
/// entries in eliminated columns and are exactly the constraints on the projection.
inline LinearSubspace eliminate(const LinearSubspace& space, const std::vector< std::string >& keep)
{
    const std::size_t n = space.coords().size();
    std::vector< std::size_t > keep_idx;
    std::vector< bool > kept(n, false);
    for (const auto& name : keep)
    {
        const auto i = space.index_of(name);
        if (!i)
            throw PreconditionError("eliminate: unknown coordinate '" + name + "'");
        keep_idx.push_back(*i);
        kept[*i] = true;
    }
    std::vector< std::size_t > order;
    for (std::size_t i = 0; i < n; ++i)
        if (!kept[i])
            order.push_back(i);
    const std::size_t eliminated = order.size();
    order.insert(order.end(), keep_idx.begin(), keep_idx.end());

    std::vector< Row > permuted;
    permuted.reserve(space.equations().size());
    for (const auto& r : space.equations())
    {
        Row p(order.size());
        for (std::size_t k = 0; k < order.size(); ++k)
            p[k] = r[order[k]];
        permuted.push_back(std::move(p));
    }
    const Echelon e = rref(std::move(permuted), order.size());
    std::vector< Row > projected;
    for (std::size_t r = 0; r < e.rows.size(); ++r)
        if (e.pivots[r] >= eliminated)
            projected.emplace_back(e.rows[r].begin() + static_cast< std::ptrdiff_t >(eliminated), e.rows[r].end());
    return LinearSubspace(keep, std::move(projected));
}

/// Multiplies a rational vector by the lcm of its denominators.
inline std::vector< BigInt > clear_denominators(const Row& v)
{
    const BigInt l = common_denominator(v);
    std::vector< BigInt > out;
    out.reserve(v.size());
    for (const auto& x : v)
        out.push_back(BigInt(x * l));
    return out;
}

} // namespace nilsemi

#endif // NILSEMI_LINSOLVE_LINEAR_HPP
