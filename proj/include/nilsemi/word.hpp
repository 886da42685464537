#ifndef NILSEMI_WORD_HPP
#define NILSEMI_WORD_HPP

#include "nilsemi/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nilsemi
{

/// Maximal block of one repeated letter.
struct Run
{
    std::size_t letter = 0;
    BigInt count = 0;

    friend bool operator==(const Run&, const Run&) = default;
};

/// Word over the alphabet {0, ..., K-1}, stored run-length encoded. Adjacent runs never share a letter.
class WitnessWord
{
  public:
    explicit WitnessWord(std::size_t alphabet_size = 0) : alphabet_size_(alphabet_size) {}

    static WitnessWord from_letters(std::size_t alphabet_size, std::span< const std::size_t > letters)
    {
        WitnessWord w(alphabet_size);
        for (auto l : letters)
            w.append(l);
        return w;
    }

    void append(std::size_t letter, const BigInt& count = 1)
    {
        if (letter >= alphabet_size_)
            throw PreconditionError("letter " + std::to_string(letter) + " outside alphabet of size " +
                                    std::to_string(alphabet_size_));
        if (count < 0)
            throw PreconditionError("negative run length");
        if (count == 0)
            return;
        if (!runs_.empty() && runs_.back().letter == letter)
            runs_.back().count += count;
        else
            runs_.push_back({letter, count});
    }

    void append(const WitnessWord& other)
    {
        for (const auto& r : other.runs_)
            append(r.letter, r.count);
    }

    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    const std::vector< Run >& runs() const noexcept { return runs_; }
    bool empty() const noexcept { return runs_.empty(); }

    BigInt length() const
    {
        BigInt n = 0;
        for (const auto& r : runs_)
            n += r.count;
        return n;
    }

    WitnessWord reversed() const
    {
        WitnessWord w(alphabet_size_);
        for (auto it = runs_.rbegin(); it != runs_.rend(); ++it)
            w.append(it->letter, it->count);
        return w;
    }

    /// Explicit letter sequence; only for words whose length fits in memory.
    std::vector< std::size_t > letters() const
    {
        std::vector< std::size_t > out;
        for (const auto& r : runs_)
        {
            if (!r.count.fits_ulong_p())
                throw PreconditionError("word too long to expand");
            out.insert(out.end(), r.count.get_ui(), r.letter);
        }
        return out;
    }

    friend bool operator==(const WitnessWord&, const WitnessWord&) = default;

  private:
    std::size_t alphabet_size_;
    std::vector< Run > runs_;
};

/// Letter counts of a word.
struct ParikhVector
{
    std::vector< BigInt > counts;

    std::size_t size() const noexcept { return counts.size(); }
    const BigInt& operator[](std::size_t i) const { return counts[i]; }
    BigInt& operator[](std::size_t i) { return counts[i]; }

    friend bool operator==(const ParikhVector&, const ParikhVector&) = default;
};

/// Signed length-two subword counts delta_ij for 0 <= i < j < K.
class DeltaTable
{
  public:
    explicit DeltaTable(std::size_t alphabet_size = 0)
        : size_(alphabet_size), values_(alphabet_size * (alphabet_size ? alphabet_size - 1 : 0) / 2)
    {
    }

    std::size_t alphabet_size() const noexcept { return size_; }

    BigInt& at(std::size_t i, std::size_t j) { return values_[index(i, j)]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }

    /// Count of (a before b) minus count of (b before a), for any a != b.
    BigInt ordered(std::size_t a, std::size_t b) const { return a < b ? at(a, b) : BigInt(-at(b, a)); }

    const std::vector< BigInt >& values() const noexcept { return values_; }

    friend bool operator==(const DeltaTable&, const DeltaTable&) = default;

  private:
    std::size_t index(std::size_t i, std::size_t j) const
    {
        if (!(i < j && j < size_))
            throw PreconditionError("delta index (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is not a pair i<j within the alphabet");
        // row-major upper triangle
        return i * size_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t size_;
    std::vector< BigInt > values_;
};

inline ParikhVector parikh(const WitnessWord& w)
{
    ParikhVector p{std::vector< BigInt >(w.alphabet_size(), 0)};
    for (const auto& r : w.runs())
        p[r.letter] += r.count;
    return p;
}

/// One left-to-right pass over the runs with running prefix counts.
inline DeltaTable delta_table(const WitnessWord& w)
{
    const std::size_t K = w.alphabet_size();
    DeltaTable d(K);
    std::vector< BigInt > seen(K, 0);
    BigInt t;
    for (const auto& r : w.runs())
    {
        for (std::size_t b = 0; b < K; ++b)
        {
            if (b == r.letter || seen[b] == 0)
                continue;
            t = seen[b] * r.count;
            if (b < r.letter)
                d.at(b, r.letter) += t;
            else
                d.at(r.letter, b) -= t;
        }
        seen[r.letter] += r.count;
    }
    return d;
}

/// Permutation of a^{count_a} b^{count_b} whose ordered statistic (a before b) - (b before a) equals target.
///
/// Starts from a^{count_a} b^{count_b} and performs (count_a*count_b - target)/2 swaps of an adjacent "a b",
/// each moving the leftmost unfinished b one step to the left. The result has at most five runs.
inline WitnessWord two_letter_permutation(std::size_t alphabet_size, std::size_t a, std::size_t b, const BigInt& count_a,
                                          const BigInt& count_b, const BigInt& target)
{
    if (a == b)
        throw PreconditionError("two_letter_permutation needs two distinct letters");
    if (count_a < 0 || count_b < 0)
        throw PreconditionError("negative letter count");
    const BigInt full = count_a * count_b;
    if (abs(target) > full)
        throw PreconditionError("|C| exceeds s_i*s_j");
    const BigInt gap = full - target;
    if (mpz_odd_p(gap.get_mpz_t()))
        throw PreconditionError("C and s_i*s_j differ in parity");

    WitnessWord w(alphabet_size);
    const BigInt swaps = gap / 2;
    if (swaps == 0 || count_a == 0)
    {
        w.append(a, count_a);
        w.append(b, count_b);
        return w;
    }
    BigInt moved_full, partial;
    mpz_fdiv_qr(moved_full.get_mpz_t(), partial.get_mpz_t(), swaps.get_mpz_t(), count_a.get_mpz_t());
    // j^q i^{s_i - r} j i^r j^{s_j - q - 1}, with the middle j absent when r = 0
    w.append(b, moved_full);
    if (partial == 0)
    {
        w.append(a, count_a);
        w.append(b, count_b - moved_full);
    }
    else
    {
        w.append(a, count_a - partial);
        w.append(b, 1);
        w.append(a, partial);
        w.append(b, count_b - moved_full - 1);
    }
    return w;
}

/// True when |C| <= l_i l_j / (4K^2) - 2K(l_i + l_j) - 4K^2, evaluated exactly after scaling by 4K^2.
inline bool within_realization_bound(const BigInt& li, const BigInt& lj, const BigInt& C, std::size_t K)
{
    const BigInt k = static_cast< unsigned long >(K);
    const BigInt lhs = 4 * k * k * abs(C);
    const BigInt rhs = li * lj - 8 * k * k * k * (li + lj) - 16 * k * k * k * k;
    return lhs <= rhs;
}

/// Word with Parikh image `counts` and delta table `targets`.
///
/// Requires K >= 2 and, for every pair, the quadratic magnitude bound and C_ij = l_i l_j (mod 2).
/// Builds W_res W W_rev with l_i = 2(K-1)s_i + r_i and rewrites one dedicated two-letter block per pair:
/// the (i,j) block of W when delta must decrease, the mirrored (j,i) block of W_rev when it must increase.
/// K = 1 degenerates to a single run.
inline WitnessWord realize_word(const ParikhVector& counts, const DeltaTable& targets)
{
    const std::size_t K = counts.size();
    if (targets.alphabet_size() != K)
        throw PreconditionError("delta table and Parikh vector disagree on alphabet size");
    for (const auto& c : counts.counts)
        if (c < 0)
            throw PreconditionError("negative Parikh entry");
    WitnessWord out(K);
    if (K == 1)
    {
        out.append(0, counts[0]);
        return out;
    }
    if (K == 0)
        return out;

    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
        {
            const BigInt& C = targets.at(i, j);
            if (!within_realization_bound(counts[i], counts[j], C, K))
                throw PreconditionError("pair (" + std::to_string(i) + "," + std::to_string(j) +
                                        "): |C| exceeds the realizability bound");
            const BigInt par = C - counts[i] * counts[j];
            if (mpz_odd_p(par.get_mpz_t()))
                throw PreconditionError("pair (" + std::to_string(i) + "," + std::to_string(j) +
                                        "): C and l_i*l_j differ in parity");
        }

    const BigInt period = 2 * static_cast< unsigned long >(K - 1);
    std::vector< BigInt > s(K), r(K);
    for (std::size_t i = 0; i < K; ++i)
        mpz_fdiv_qr(s[i].get_mpz_t(), r[i].get_mpz_t(), counts[i].get_mpz_t(), period.get_mpz_t());

    auto block = [&](std::size_t a, std::size_t b) {
        WitnessWord w(K);
        w.append(a, s[a]);
        w.append(b, s[b]);
        return w;
    };

    // forward[(i,j)] replaces A_i^{s_i} A_j^{s_j} inside W, backward[(i,j)] replaces A_j^{s_j} A_i^{s_i} inside W_rev
    std::vector< WitnessWord > forward, backward;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
        {
            const BigInt initial = r[i] * r[j] + period * (r[i] * s[j] - r[j] * s[i]);
            const BigInt diff = initial - targets.at(i, j);
            const BigInt full = s[i] * s[j];
            if (diff > 0)
            {
                forward.push_back(two_letter_permutation(K, i, j, s[i], s[j], full - diff));
                backward.push_back(block(j, i));
            }
            else if (diff < 0)
            {
                forward.push_back(block(i, j));
                backward.push_back(two_letter_permutation(K, j, i, s[j], s[i], full + diff));
            }
            else
            {
                forward.push_back(block(i, j));
                backward.push_back(block(j, i));
            }
        }

    for (std::size_t i = 0; i < K; ++i)
        out.append(i, r[i]);
    for (const auto& w : forward)
        out.append(w);
    for (auto it = backward.rbegin(); it != backward.rend(); ++it)
        out.append(*it);

    if (parikh(out) != counts || delta_table(out) != targets)
        throw InternalError("realize_word: recount does not match the requested statistics");
    return out;
}

} // namespace nilsemi

#endif // NILSEMI_WORD_HPP
