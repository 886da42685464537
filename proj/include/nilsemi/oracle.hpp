#ifndef NILSEMI_ORACLE_HPP
#define NILSEMI_ORACLE_HPP

#include "nilsemi/intersect.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/matrix.hpp"
#include "nilsemi/orbit.hpp"
#include "nilsemi/word.hpp"

#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace nilsemi
{

/// Element cap for the oracle: NILSEMI_MEMORY_BUDGET if set, otherwise five million stored matrices.
inline std::size_t oracle_memory_budget()
{
    if (const char* env = std::getenv("NILSEMI_MEMORY_BUDGET"))
    {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast< std::size_t >(v);
    }
    return 5000000;
}

struct OracleResult
{
    bool found = false;
    std::vector< WitnessWord > witnesses; // one word per set, or (v, w) for orbits
    std::optional< UnipotentMatrix > common;
    std::size_t stored = 0; // distinct elements kept across all searches
};

namespace detail
{
/// Distinct products of nonempty words of length <= depth, each with its shortlex-least word.
/// Elements are listed in the order of their least words.
class BallSearch
{
  public:
    BallSearch(const GeneratorSystem& sys, std::size_t depth, const UnipotentMatrix& left, std::size_t& stored,
               std::size_t budget)
    {
        for (std::size_t i = 0; i < sys.size(); ++i)
            add(left * sys.generator(i), npos, i, stored, budget);
        std::size_t begin = 0;
        for (std::size_t len = 2; len <= depth; ++len)
        {
            const std::size_t end = nodes_.size();
            if (begin == end)
                break;
            for (std::size_t p = begin; p < end; ++p)
                for (std::size_t i = 0; i < sys.size(); ++i)
                    add(nodes_[p].value * sys.generator(i), p, i, stored, budget);
            begin = end;
        }
        alphabet_ = sys.size();
    }

    std::size_t size() const { return nodes_.size(); }
    const UnipotentMatrix& value(std::size_t k) const { return nodes_[k].value; }

    std::optional< std::size_t > find(const UnipotentMatrix& m) const
    {
        const auto it = index_.find(m.matrix());
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    WitnessWord word(std::size_t k) const
    {
        std::vector< std::size_t > letters;
        for (std::size_t p = k; p != npos; p = nodes_[p].parent)
            letters.push_back(nodes_[p].letter);
        std::vector< std::size_t > fwd(letters.rbegin(), letters.rend());
        return WitnessWord::from_letters(alphabet_, fwd);
    }

  private:
    static constexpr std::size_t npos = static_cast< std::size_t >(-1);

    struct Node
    {
        UnipotentMatrix value;
        std::size_t parent;
        std::size_t letter;
    };

    void add(UnipotentMatrix m, std::size_t parent, std::size_t letter, std::size_t& stored, std::size_t budget)
    {
        if (index_.count(m.matrix()))
            return;
        if (++stored > budget)
            throw BudgetExceeded("oracle memory budget exceeded", "NILSEMI_MEMORY_BUDGET=" + std::to_string(budget));
        index_.emplace(m.matrix(), nodes_.size());
        nodes_.push_back({std::move(m), parent, letter});
    }

    std::vector< Node > nodes_;
    std::unordered_map< Matrix, std::size_t, MatrixHash > index_;
    std::size_t alphabet_ = 0;
};
} // namespace detail

/// Bounded search for a common element of all generated semigroups using words of length <= depth.
/// A hit is the first element of the first set's ball (shortlex on its word) that lies in every other ball.
inline OracleResult bfs_intersection(const IntersectionInstance& inst, std::size_t depth,
                                     std::size_t budget = oracle_memory_budget())
{
    inst.validate();
    OracleResult r;
    const UnipotentMatrix id = UnipotentMatrix::identity(inst.n);
    std::vector< detail::BallSearch > balls;
    for (const auto& sys : inst.systems)
        balls.emplace_back(sys, depth, id, r.stored, budget);
    for (std::size_t k = 0; k < balls[0].size(); ++k)
    {
        std::vector< std::size_t > hits{k};
        for (std::size_t m = 1; m < balls.size(); ++m)
        {
            const auto h = balls[m].find(balls[0].value(k));
            if (!h)
                break;
            hits.push_back(*h);
        }
        if (hits.size() != balls.size())
            continue;
        r.found = true;
        for (std::size_t m = 0; m < balls.size(); ++m)
            r.witnesses.push_back(balls[m].word(hits[m]));
        r.common = balls[0].value(k);
        return r;
    }
    return r;
}

/// Bounded search for T v = S w with v, w nonempty of length <= depth; the first S w in shortlex order wins.
inline OracleResult bfs_orbit(const OrbitInstance& inst, std::size_t depth, std::size_t budget = oracle_memory_budget())
{
    inst.validate();
    OracleResult r;
    const detail::BallSearch left(inst.G, depth, inst.T.matrix(), r.stored, budget);
    const detail::BallSearch right(inst.H, depth, inst.S.matrix(), r.stored, budget);
    for (std::size_t k = 0; k < right.size(); ++k)
    {
        const auto h = left.find(right.value(k));
        if (!h)
            continue;
        r.found = true;
        r.witnesses = {left.word(*h), right.word(k)};
        r.common = right.value(k);
        return r;
    }
    return r;
}

} // namespace nilsemi

#endif // NILSEMI_ORACLE_HPP
