#ifndef NILSEMI_TESTS_SUPPORT_HPP
#define NILSEMI_TESTS_SUPPORT_HPP

#include <nilsemi.hpp>

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testkit
{
using namespace nilsemi;

inline long uniform(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution< long >(lo, hi)(rng); }

inline Rational random_rational(std::mt19937_64& rng, long max_num, long max_den)
{
    return make_rational(BigInt(uniform(rng, -max_num, max_num)), BigInt(uniform(rng, 1, max_den)));
}

inline UnipotentMatrix random_unipotent(std::mt19937_64& rng, std::size_t n, long max_num, long max_den)
{
    Matrix m = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = random_rational(rng, max_num, max_den);
    return UnipotentMatrix(m);
}

inline NilpotentMatrix random_nilpotent(std::mt19937_64& rng, std::size_t n, long max_num, long max_den)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = random_rational(rng, max_num, max_den);
    return NilpotentMatrix(m);
}

inline UnipotentMatrix random_h3_int(std::mt19937_64& rng, long bound)
{
    return h3(uniform(rng, -bound, bound), uniform(rng, -bound, bound), uniform(rng, -bound, bound));
}

inline GeneratorSystem system_of(std::vector< UnipotentMatrix > gens, const std::string& prefix = "g")
{
    std::vector< std::string > names;
    for (std::size_t i = 0; i < gens.size(); ++i)
        names.push_back(prefix + std::to_string(i + 1));
    const std::size_t n = gens.empty() ? 3 : gens.front().dim();
    return GeneratorSystem(n, std::move(names), std::move(gens));
}

inline WitnessWord random_word(std::mt19937_64& rng, std::size_t K, std::size_t len)
{
    WitnessWord w(K);
    for (std::size_t i = 0; i < len; ++i)
        w.append(static_cast< std::size_t >(uniform(rng, 0, static_cast< long >(K) - 1)));
    return w;
}

inline FieldPtr sqrt2_field() { return std::make_shared< const NumberField >(std::vector< Rational >{-2, 0, 1}); }
inline FieldPtr cbrt2_field() { return std::make_shared< const NumberField >(std::vector< Rational >{-2, 0, 0, 1}); }
inline FieldPtr rational_field() { return std::make_shared< const NumberField >(std::vector< Rational >{0, 1}); }

inline FieldElem random_field_elem(std::mt19937_64& rng, const FieldPtr& K, long max_num, long max_den)
{
    std::vector< Rational > c;
    for (std::size_t i = 0; i < K->degree(); ++i)
        c.push_back(random_rational(rng, max_num, max_den));
    return FieldElem(K, std::move(c));
}

inline HeisenbergElemK random_heisenberg(std::mt19937_64& rng, std::size_t n, const FieldPtr& K, long max_num,
                                         long max_den)
{
    std::vector< FieldElem > a, b;
    for (std::size_t i = 0; i + 2 < n; ++i)
    {
        a.push_back(random_field_elem(rng, K, max_num, max_den));
        b.push_back(random_field_elem(rng, K, max_num, max_den));
    }
    return HeisenbergElemK(n, std::move(a), std::move(b), random_field_elem(rng, K, max_num, max_den));
}

/// Brute-force delta: for every position pair p < q, +1 if (i,j) appear in that order, -1 if reversed.
inline BigInt naive_delta(const std::vector< std::size_t >& letters, std::size_t i, std::size_t j)
{
    BigInt d = 0;
    for (std::size_t p = 0; p < letters.size(); ++p)
        for (std::size_t q = p + 1; q < letters.size(); ++q)
        {
            if (letters[p] == i && letters[q] == j)
                d += 1;
            if (letters[p] == j && letters[q] == i)
                d -= 1;
        }
    return d;
}

} // namespace testkit

#endif // NILSEMI_TESTS_SUPPORT_HPP
