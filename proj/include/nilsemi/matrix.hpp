#ifndef NILSEMI_MATRIX_HPP
#define NILSEMI_MATRIX_HPP

#include "nilsemi/rational.hpp"

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace nilsemi
{

/// Dense row-major rational matrix.
class Matrix
{
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list< std::initializer_list< Rational > > rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows)
        {
            if (row.size() != cols_)
                throw std::invalid_argument("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j)
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const Rational& operator()(std::size_t i, std::size_t j) const
    {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    const std::vector< Rational >& data() const noexcept { return data_; }

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (v != 0)
                return false;
        return true;
    }

    Matrix& operator+=(const Matrix& o)
    {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const Rational& s)
    {
        for (auto& v : data_)
            v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const Rational& s) { return a *= s; }
    friend Matrix operator*(const Rational& s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& v : a.data_)
            v = -v;
        return a;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product: inner dimensions differ");
        Matrix r(a.rows_, b.cols_);
        Rational t;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
            {
                const Rational& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                {
                    if (b(k, j) == 0)
                        continue;
                    t = aik * b(k, j);
                    r(i, j) += t;
                }
            }
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m)
    {
        os << '[';
        for (std::size_t i = 0; i < m.rows_; ++i)
        {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? " " : "") << m(i, j);
        }
        return os << ']';
    }

    /// Common denominator of all entries.
    BigInt denominator() const { return common_denominator(data_); }

    std::size_t bit_size() const
    {
        std::size_t s = 0;
        for (const auto& v : data_)
            s += nilsemi::bit_size(v);
        return s;
    }

  private:
    void require_same_shape(const Matrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector< Rational > data_;
};

/// Block-diagonal matrix diag(blocks...).
inline Matrix block_diagonal(const std::vector< Matrix >& blocks)
{
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks)
    {
        r += b.rows();
        c += b.cols();
    }
    Matrix out(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks)
    {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return out;
}

struct MatrixHash
{
    std::size_t operator()(const Matrix& m) const
    {
        std::size_t h = m.rows() * 31 + m.cols();
        for (const auto& v : m.data())
            h ^= hash_value(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

} // namespace nilsemi

#endif // NILSEMI_MATRIX_HPP
