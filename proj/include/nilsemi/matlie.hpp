#ifndef NILSEMI_MATLIE_HPP
#define NILSEMI_MATLIE_HPP

#include "nilsemi/matrix.hpp"
#include "nilsemi/word.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace nilsemi
{

class UnipotentMatrix;
class NilpotentMatrix;
inline NilpotentMatrix log_unipotent(const UnipotentMatrix& m);
inline UnipotentMatrix exp_nilpotent(const NilpotentMatrix& x);

/// True iff m is square, upper triangular and has ones on the diagonal.
inline bool check_unipotent(const Matrix& m)
{
    if (!m.is_square())
        return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        if (m(i, i) != 1)
            return false;
        for (std::size_t j = 0; j < i; ++j)
            if (m(i, j) != 0)
                return false;
    }
    return true;
}

inline bool check_strictly_upper(const Matrix& m)
{
    if (!m.is_square())
        return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (m(i, j) != 0)
                return false;
    return true;
}

/// Element of UT(n, Q).
class UnipotentMatrix
{
  public:
    explicit UnipotentMatrix(Matrix m) : m_(std::move(m))
    {
        if (!check_unipotent(m_))
            throw PreconditionError("matrix is not upper unitriangular");
    }

    static UnipotentMatrix identity(std::size_t n) { return UnipotentMatrix(Matrix::identity(n)); }

    std::size_t dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    bool is_identity() const { return m_ == Matrix::identity(dim()); }

    friend UnipotentMatrix operator*(const UnipotentMatrix& a, const UnipotentMatrix& b)
    {
        if (a.dim() != b.dim())
            throw PreconditionError("dimension mismatch in product");
        return UnipotentMatrix(a.m_ * b.m_, Trusted{});
    }
    friend bool operator==(const UnipotentMatrix& a, const UnipotentMatrix& b) { return a.m_ == b.m_; }
    friend std::ostream& operator<<(std::ostream& os, const UnipotentMatrix& u) { return os << u.m_; }

  private:
    struct Trusted
    {
    };
    UnipotentMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
    friend UnipotentMatrix exp_nilpotent(const NilpotentMatrix&);

    Matrix m_;
};

/// Strictly upper triangular element of the Lie algebra u(n).
class NilpotentMatrix
{
  public:
    explicit NilpotentMatrix(Matrix m) : m_(std::move(m))
    {
        if (!check_strictly_upper(m_))
            throw PreconditionError("matrix is not strictly upper triangular");
    }

    static NilpotentMatrix zero(std::size_t n) { return NilpotentMatrix(Matrix(n, n), Trusted{}); }

    std::size_t dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    bool is_zero() const { return m_.is_zero(); }

    NilpotentMatrix& operator+=(const NilpotentMatrix& o)
    {
        m_ += o.m_;
        return *this;
    }
    NilpotentMatrix& operator-=(const NilpotentMatrix& o)
    {
        m_ -= o.m_;
        return *this;
    }
    friend NilpotentMatrix operator+(NilpotentMatrix a, const NilpotentMatrix& b) { return a += b; }
    friend NilpotentMatrix operator-(NilpotentMatrix a, const NilpotentMatrix& b) { return a -= b; }
    friend NilpotentMatrix operator-(const NilpotentMatrix& a) { return NilpotentMatrix(-a.m_, Trusted{}); }
    friend NilpotentMatrix operator*(const Rational& s, const NilpotentMatrix& a)
    {
        return NilpotentMatrix(s * a.m_, Trusted{});
    }
    friend NilpotentMatrix operator*(const NilpotentMatrix& a, const NilpotentMatrix& b)
    {
        return NilpotentMatrix(a.m_ * b.m_, Trusted{});
    }
    friend bool operator==(const NilpotentMatrix& a, const NilpotentMatrix& b) { return a.m_ == b.m_; }
    friend std::ostream& operator<<(std::ostream& os, const NilpotentMatrix& x) { return os << x.m_; }

  private:
    struct Trusted
    {
    };
    NilpotentMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
    friend NilpotentMatrix log_unipotent(const UnipotentMatrix&);

    Matrix m_;
};

/// sum_{k=1}^{n-1} (-1)^{k-1}/k (M - I)^k; the series stops because (M - I)^n = 0.
inline NilpotentMatrix log_unipotent(const UnipotentMatrix& m)
{
    const std::size_t n = m.dim();
    const Matrix x = m.matrix() - Matrix::identity(n);
    Matrix power = x;
    Matrix sum(n, n);
    for (std::size_t k = 1; k < n && !power.is_zero(); ++k)
    {
        sum += make_rational(k % 2 == 1 ? 1 : -1, static_cast< unsigned long >(k)) * power;
        power = power * x;
    }
    return NilpotentMatrix(std::move(sum), NilpotentMatrix::Trusted{});
}

/// sum_{k=0}^{n-1} X^k / k!.
inline UnipotentMatrix exp_nilpotent(const NilpotentMatrix& x)
{
    const std::size_t n = x.dim();
    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (std::size_t k = 1; k < n; ++k)
    {
        term = term * x.matrix();
        if (term.is_zero())
            break;
        term *= make_rational(1, static_cast< unsigned long >(k));
        sum += term;
    }
    return UnipotentMatrix(std::move(sum), UnipotentMatrix::Trusted{});
}

/// [X, Y] = XY - YX.
inline NilpotentMatrix bracket(const NilpotentMatrix& x, const NilpotentMatrix& y)
{
    if (x.dim() != y.dim())
        throw PreconditionError("bracket: dimension mismatch");
    return x * y - y * x;
}

inline UnipotentMatrix inverse(const UnipotentMatrix& m) { return exp_nilpotent(-log_unipotent(m)); }

/// Group commutator g^{-1} h^{-1} g h.
inline UnipotentMatrix commutator(const UnipotentMatrix& g, const UnipotentMatrix& h)
{
    return inverse(g) * inverse(h) * g * h;
}

/// Binary powering; negative exponents power the inverse.
inline UnipotentMatrix power(const UnipotentMatrix& m, BigInt e)
{
    UnipotentMatrix result = UnipotentMatrix::identity(m.dim());
    UnipotentMatrix base = e < 0 ? inverse(m) : m;
    e = abs(e);
    while (e > 0)
    {
        if (mpz_odd_p(e.get_mpz_t()))
            result = result * base;
        e >>= 1;
        if (e > 0)
            base = base * base;
    }
    return result;
}

/// Named finite alphabet of unipotent matrices with cached logarithms and pairwise brackets.
class GeneratorSystem
{
  public:
    GeneratorSystem() = default;

    GeneratorSystem(std::size_t n, std::vector< std::string > names, std::vector< UnipotentMatrix > generators)
        : n_(n), names_(std::move(names)), generators_(std::move(generators))
    {
        if (names_.size() != generators_.size())
            throw PreconditionError("generator names and matrices differ in number");
        for (const auto& g : generators_)
            if (g.dim() != n_)
                throw PreconditionError("generator dimension differs from the system dimension");
        logs_.reserve(generators_.size());
        for (const auto& g : generators_)
            logs_.push_back(log_unipotent(g));
        const std::size_t K = generators_.size();
        brackets_.reserve(K * (K ? K - 1 : 0) / 2);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = i + 1; j < K; ++j)
                brackets_.push_back(nilsemi::bracket(logs_[i], logs_[j]));
    }

    /// Unnamed generators get names g1, g2, ...
    static GeneratorSystem from_matrices(std::size_t n, std::vector< UnipotentMatrix > generators)
    {
        std::vector< std::string > names;
        for (std::size_t i = 0; i < generators.size(); ++i)
            names.push_back("g" + std::to_string(i + 1));
        return GeneratorSystem(n, std::move(names), std::move(generators));
    }

    std::size_t dim() const noexcept { return n_; }
    std::size_t size() const noexcept { return generators_.size(); }
    const std::vector< std::string >& names() const noexcept { return names_; }
    const std::vector< UnipotentMatrix >& generators() const noexcept { return generators_; }
    const UnipotentMatrix& generator(std::size_t i) const { return generators_.at(i); }
    const NilpotentMatrix& log(std::size_t i) const { return logs_.at(i); }

    /// Cached [log A_i, log A_j] for i < j.
    const NilpotentMatrix& bracket(std::size_t i, std::size_t j) const
    {
        const std::size_t K = size();
        if (!(i < j && j < K))
            throw PreconditionError("bracket index must satisfy i < j < K");
        return brackets_[i * K - i * (i + 1) / 2 + (j - i - 1)];
    }

  private:
    std::size_t n_ = 0;
    std::vector< std::string > names_;
    std::vector< UnipotentMatrix > generators_;
    std::vector< NilpotentMatrix > logs_;
    std::vector< NilpotentMatrix > brackets_;
};

/// 2-step nilpotency of the generated group: every generator commutator [g_i, g_j] commutes with every generator.
inline bool is_two_step(const GeneratorSystem& gens)
{
    const std::size_t K = gens.size();
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
        {
            const UnipotentMatrix c = commutator(gens.generator(i), gens.generator(j));
            if (c.is_identity())
                continue;
            for (std::size_t k = 0; k < K; ++k)
                if (!(c * gens.generator(k) == gens.generator(k) * c))
                    return false;
        }
    return true;
}

/// sum_i l_i log A_i + 1/2 sum_{i<j} delta_ij [log A_i, log A_j].
///
/// Only meaningful for 2-step systems; callers that have not established this pass check = true.
inline NilpotentMatrix bch_log(const GeneratorSystem& gens, const ParikhVector& counts, const DeltaTable& delta,
                               bool check = false)
{
    const std::size_t K = gens.size();
    if (counts.size() != K || delta.alphabet_size() != K)
        throw PreconditionError("bch_log: statistics do not match the alphabet size");
    if (check && !is_two_step(gens))
        throw PreconditionError("bch_log: generator system is not 2-step nilpotent");
    NilpotentMatrix sum = NilpotentMatrix::zero(gens.dim());
    for (std::size_t i = 0; i < K; ++i)
        if (counts[i] != 0)
            sum += Rational(counts[i]) * gens.log(i);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
            if (delta.at(i, j) != 0)
                sum += make_rational(delta.at(i, j), 2) * gens.bracket(i, j);
    return sum;
}

/// Ordered product of the word's letters; the empty word is I.
inline UnipotentMatrix product_of_word(const GeneratorSystem& gens, const WitnessWord& word)
{
    if (word.alphabet_size() != gens.size())
        throw PreconditionError("product_of_word: word alphabet does not match the generator system");
    UnipotentMatrix p = UnipotentMatrix::identity(gens.dim());
    for (const auto& run : word.runs())
    {
        if (run.letter >= gens.size())
            throw PreconditionError("product_of_word: letter index out of range");
        p = p * power(gens.generator(run.letter), run.count);
    }
    return p;
}

/// Heisenberg coordinates for n = 3: the matrix [[1,a,c],[0,1,b],[0,0,1]].
inline UnipotentMatrix h3(const Rational& a, const Rational& b, const Rational& c)
{
    return UnipotentMatrix(Matrix{{1, a, c}, {0, 1, b}, {0, 0, 1}});
}

/// Strictly upper triangular 3x3 with superdiagonal (a, b) and corner c.
inline NilpotentMatrix h3_lie(const Rational& a, const Rational& b, const Rational& c)
{
    return NilpotentMatrix(Matrix{{0, a, c}, {0, 0, b}, {0, 0, 0}});
}

} // namespace nilsemi

#endif // NILSEMI_MATLIE_HPP
