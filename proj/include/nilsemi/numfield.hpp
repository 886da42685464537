#ifndef NILSEMI_NUMFIELD_HPP
#define NILSEMI_NUMFIELD_HPP

#include "nilsemi/matlie.hpp"
#include "nilsemi/matrix.hpp"
#include "nilsemi/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilsemi
{

namespace poly
{
// Dense polynomials over Q, coefficients from the constant term upwards, no trailing zeros.
using Poly = std::vector< Rational >;

inline void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline Poly sub(Poly a, const Poly& b)
{
    if (a.size() < b.size())
        a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] -= b[i];
    trim(a);
    return a;
}

/// Quotient and remainder of a by a non-zero b.
inline std::pair< Poly, Poly > divmod(Poly a, const Poly& b)
{
    trim(a);
    if (b.empty())
        throw PreconditionError("polynomial division by zero");
    if (a.size() < b.size())
        return {{}, a};
    Poly q(a.size() - b.size() + 1);
    const Rational& lead = b.back();
    for (std::size_t k = a.size(); k-- >= b.size();)
    {
        const Rational f = a[k] / lead;
        q[k - b.size() + 1] = f;
        if (f != 0)
            for (std::size_t i = 0; i < b.size(); ++i)
                a[k - b.size() + 1 + i] -= f * b[i];
    }
    trim(q);
    a.resize(b.size() - 1);
    trim(a);
    return {q, a};
}

inline Rational evaluate(const Poly& p, const Rational& t)
{
    Rational v = 0;
    for (std::size_t k = p.size(); k-- > 0;)
        v = v * t + p[k];
    return v;
}
} // namespace poly

/// Q(alpha) for a monic minimal polynomial of degree d, with power basis 1, alpha, ..., alpha^{d-1}.
///
/// Irreducibility is the caller's assertion; rational_root() offers a partial check.
class NumberField
{
  public:
    /// Coefficients from the constant term upwards; the leading coefficient must be 1.
    explicit NumberField(std::vector< Rational > minimal_polynomial) : minpoly_(std::move(minimal_polynomial))
    {
        poly::trim(minpoly_);
        if (minpoly_.size() < 2)
            throw PreconditionError("minimal polynomial must have degree at least 1");
        if (minpoly_.back() != 1)
            throw PreconditionError("minimal polynomial must be monic");
    }

    std::size_t degree() const noexcept { return minpoly_.size() - 1; }
    const std::vector< Rational >& minimal_polynomial() const noexcept { return minpoly_; }

    friend bool operator==(const NumberField& a, const NumberField& b) { return a.minpoly_ == b.minpoly_; }

    /// A rational root of the minimal polynomial if one exists (then the polynomial is reducible for d >= 2).
    /// Candidates come from the rational root theorem; returns nullopt without a verdict when the
    /// integer coefficients are too large to enumerate divisors.
    std::optional< Rational > rational_root(bool* complete = nullptr) const
    {
        const BigInt scale = common_denominator(minpoly_);
        std::vector< BigInt > ints;
        for (const auto& c : minpoly_)
            ints.push_back(BigInt(c * scale));
        if (complete)
            *complete = true;
        if (ints.front() == 0)
            return Rational(0);
        auto divisors = [](BigInt v) -> std::optional< std::vector< BigInt > > {
            v = abs(v);
            if (v > BigInt(1000000000000ul))
                return std::nullopt;
            std::vector< BigInt > ds;
            for (BigInt k = 1; k * k <= v; ++k)
                if (v % k == 0)
                {
                    ds.push_back(k);
                    if (k * k != v)
                        ds.push_back(BigInt(v / k));
                }
            return ds;
        };
        const auto ps = divisors(ints.front());
        const auto qs = divisors(ints.back());
        if (!ps || !qs)
        {
            if (complete)
                *complete = false;
            return std::nullopt;
        }
        for (const auto& p : *ps)
            for (const auto& q : *qs)
                for (int s : {1, -1})
                {
                    const Rational cand = make_rational(BigInt(s * p), q);
                    if (poly::evaluate(minpoly_, cand) == 0)
                        return cand;
                }
        return std::nullopt;
    }

  private:
    std::vector< Rational > minpoly_;
};

using FieldPtr = std::shared_ptr< const NumberField >;

/// Element of a number field in power-basis coordinates.
class FieldElem
{
  public:
    FieldElem(FieldPtr field, std::vector< Rational > coords) : field_(std::move(field)), coords_(std::move(coords))
    {
        if (!field_)
            throw PreconditionError("field element without a field");
        if (coords_.size() != field_->degree())
            throw PreconditionError("coordinate vector length differs from the field degree");
    }

    static FieldElem constant(FieldPtr field, const Rational& value)
    {
        std::vector< Rational > c(field->degree());
        c[0] = value;
        return FieldElem(std::move(field), std::move(c));
    }
    static FieldElem zero(FieldPtr field) { return constant(std::move(field), 0); }
    static FieldElem one(FieldPtr field) { return constant(std::move(field), 1); }
    /// The generator alpha (requires degree >= 2).
    static FieldElem generator(FieldPtr field)
    {
        if (field->degree() < 2)
            throw PreconditionError("generator of a degree-1 field is a rational; use constant()");
        std::vector< Rational > c(field->degree());
        c[1] = 1;
        return FieldElem(std::move(field), std::move(c));
    }

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector< Rational >& coords() const noexcept { return coords_; }
    bool is_zero() const
    {
        return std::all_of(coords_.begin(), coords_.end(), [](const Rational& v) { return v == 0; });
    }

    friend FieldElem operator+(const FieldElem& x, const FieldElem& y)
    {
        require_same_field(x, y);
        std::vector< Rational > c = x.coords_;
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += y.coords_[i];
        return FieldElem(x.field_, std::move(c));
    }
    friend FieldElem operator-(const FieldElem& x, const FieldElem& y)
    {
        require_same_field(x, y);
        std::vector< Rational > c = x.coords_;
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] -= y.coords_[i];
        return FieldElem(x.field_, std::move(c));
    }
    friend FieldElem operator*(const FieldElem& x, const FieldElem& y)
    {
        require_same_field(x, y);
        poly::Poly px = x.coords_, py = y.coords_;
        poly::trim(px);
        poly::trim(py);
        return from_poly(x.field_, poly::divmod(poly::mul(px, py), x.field_->minimal_polynomial()).second);
    }
    friend bool operator==(const FieldElem& x, const FieldElem& y)
    {
        return *x.field_ == *y.field_ && x.coords_ == y.coords_;
    }

    /// Inverse via the extended Euclidean algorithm against the minimal polynomial.
    FieldElem inverse() const
    {
        if (is_zero())
            throw PreconditionError("inversion of zero in a number field");
        // invariant: r_k = s_k * x (mod minpoly)
        poly::Poly r0 = field_->minimal_polynomial(), r1 = coords_;
        poly::trim(r1);
        poly::Poly s0{}, s1{Rational(1)};
        while (r1.size() > 1)
        {
            auto [q, r] = poly::divmod(r0, r1);
            poly::Poly s = poly::sub(s0, poly::mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        if (r1.empty())
            throw PreconditionError("element is a zero divisor: the minimal polynomial is reducible");
        const Rational c = r1[0];
        for (auto& v : s1)
            v /= c;
        return from_poly(field_, poly::divmod(s1, field_->minimal_polynomial()).second);
    }

  private:
    static FieldElem from_poly(const FieldPtr& field, poly::Poly p)
    {
        p.resize(field->degree());
        return FieldElem(field, std::move(p));
    }
    static void require_same_field(const FieldElem& x, const FieldElem& y)
    {
        if (x.field_ != y.field_ && !(*x.field_ == *y.field_))
            throw PreconditionError("field mismatch");
    }

    FieldPtr field_;
    std::vector< Rational > coords_;
};

/// Matrix of multiplication by x in the power basis: column k holds the coordinates of x * alpha^k.
inline Matrix regular_representation(const FieldElem& x)
{
    const std::size_t d = x.field()->degree();
    Matrix m(d, d);
    for (std::size_t k = 0; k < d; ++k)
    {
        std::vector< Rational > basis(d);
        basis[k] = 1;
        const FieldElem col = x * FieldElem(x.field(), std::move(basis));
        for (std::size_t i = 0; i < d; ++i)
            m(i, k) = col.coords()[i];
    }
    return m;
}

/// Element of H_n(K): the matrix [[1, a^T, c], [0, I_{n-2}, b], [0, 0, 1]].
struct HeisenbergElemK
{
    std::size_t n = 3;
    std::vector< FieldElem > a;
    std::vector< FieldElem > b;
    FieldElem c;

    HeisenbergElemK(std::size_t n_, std::vector< FieldElem > a_, std::vector< FieldElem > b_, FieldElem c_)
        : n(n_), a(std::move(a_)), b(std::move(b_)), c(std::move(c_))
    {
        if (n < 3)
            throw PreconditionError("Heisenberg groups need n >= 3");
        if (a.size() != n - 2 || b.size() != n - 2)
            throw PreconditionError("Heisenberg vectors must have length n-2");
        for (const auto& e : a)
            if (!(*e.field() == *c.field()))
                throw PreconditionError("field mismatch in Heisenberg element");
        for (const auto& e : b)
            if (!(*e.field() == *c.field()))
                throw PreconditionError("field mismatch in Heisenberg element");
    }

    static HeisenbergElemK identity(std::size_t n, const FieldPtr& field)
    {
        return HeisenbergElemK(n, std::vector< FieldElem >(n - 2, FieldElem::zero(field)),
                               std::vector< FieldElem >(n - 2, FieldElem::zero(field)), FieldElem::zero(field));
    }

    const FieldPtr& field() const { return c.field(); }

    friend HeisenbergElemK operator*(const HeisenbergElemK& x, const HeisenbergElemK& y)
    {
        if (x.n != y.n)
            throw PreconditionError("Heisenberg dimension mismatch");
        std::vector< FieldElem > a, b;
        FieldElem c = x.c + y.c;
        for (std::size_t i = 0; i < x.n - 2; ++i)
        {
            a.push_back(x.a[i] + y.a[i]);
            b.push_back(x.b[i] + y.b[i]);
            c = c + x.a[i] * y.b[i];
        }
        return HeisenbergElemK(x.n, std::move(a), std::move(b), std::move(c));
    }
};

/// Block substitution of iota into the n x n matrix over K, giving an element of UT(n d, Q).
inline UnipotentMatrix embed_heisenberg(const HeisenbergElemK& h)
{
    const std::size_t n = h.n;
    const std::size_t d = h.field()->degree();
    Matrix out = Matrix::identity(n * d);
    auto place = [&](std::size_t bi, std::size_t bj, const FieldElem& e) {
        const Matrix block = regular_representation(e);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                out(bi * d + i, bj * d + j) = block(i, j);
    };
    for (std::size_t k = 0; k < n - 2; ++k)
    {
        place(0, k + 1, h.a[k]);
        place(k + 1, n - 1, h.b[k]);
    }
    place(0, n - 1, h.c);
    return UnipotentMatrix(std::move(out));
}

} // namespace nilsemi

#endif // NILSEMI_NUMFIELD_HPP
