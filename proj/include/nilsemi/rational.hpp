#ifndef NILSEMI_RATIONAL_HPP
#define NILSEMI_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nilsemi
{

/// Exact rational in lowest terms with positive denominator. GMP arithmetic results are canonical;
/// construct from a numerator/denominator pair through make_rational.
using Rational = mpq_class;
/// Arbitrary precision integer.
using BigInt = mpz_class;

using RationalVector = std::vector<Rational>;
using IntVector = std::vector<BigInt>;

/// Raised when a documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a construction that is proven to succeed produced an inconsistent result.
class InternalError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Raised when a configured enumeration or memory budget is exhausted.
class BudgetExceeded : public std::runtime_error
{
  public:
    BudgetExceeded(const std::string& what, std::string cap) : std::runtime_error(what), cap_(std::move(cap)) {}
    const std::string& cap() const noexcept { return cap_; }

  private:
    std::string cap_;
};

/// Raised when an instance falls outside the cases the procedure decides.
class Unsupported : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Parses "p" or "p/q" (optional leading sign, decimal digits only). Floating literals are rejected.
inline Rational parse_rational(std::string_view text)
{
    auto is_digits = [](std::string_view s) {
        if (s.empty())
            return false;
        for (char ch : s)
            if (ch < '0' || ch > '9')
                return false;
        return true;
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+'))
    {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den))
        throw std::invalid_argument("not an exact rational literal: '" + std::string(text) + "'");
    BigInt n(std::string(num), 10);
    BigInt d(std::string(den), 10);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(negative ? BigInt(-n) : n, d);
    r.canonicalize();
    return r;
}

/// num/den in canonical form.
inline Rational make_rational(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }
inline std::string to_string(const BigInt& z) { return z.get_str(10); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Least common multiple of all denominators (1 for an empty range).
inline BigInt common_denominator(std::span<const Rational> values)
{
    BigInt l = 1;
    for (const auto& v : values)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

inline BigInt floor_of(const Rational& r)
{
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline BigInt ceil_of(const Rational& r)
{
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline BigInt gcd_of(const BigInt& a, const BigInt& b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline int sign_of(const Rational& r) { return sgn(r); }
inline int sign_of(const BigInt& z) { return sgn(z); }

inline std::size_t hash_value(const BigInt& z)
{
    const std::size_t limbs = mpz_size(z.get_mpz_t());
    std::size_t h = static_cast< std::size_t >(sgn(z)) * 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < limbs; ++i)
        h ^= static_cast< std::size_t >(mpz_getlimbn(z.get_mpz_t(), static_cast< mp_size_t >(i))) + 0x9e3779b97f4a7c15ull +
             (h << 6) + (h >> 2);
    return h;
}

inline std::size_t hash_value(const Rational& r)
{
    std::size_t h = hash_value(r.get_num());
    return h ^ (hash_value(r.get_den()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

/// Bit length of numerator plus denominator, the size measure used for monitoring growth.
inline std::size_t bit_size(const Rational& r)
{
    return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

} // namespace nilsemi

#endif // NILSEMI_RATIONAL_HPP
