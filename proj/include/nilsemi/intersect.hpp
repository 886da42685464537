#ifndef NILSEMI_INTERSECT_HPP
#define NILSEMI_INTERSECT_HPP

#include "nilsemi/decision.hpp"
#include "nilsemi/linsolve.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/rational.hpp"
#include "nilsemi/word.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace nilsemi
{

/// M generator sets in a common UT(n, Q).
struct IntersectionInstance
{
    std::size_t n = 0;
    std::vector< GeneratorSystem > systems;

    /// All generators of all systems taken together.
    GeneratorSystem combined() const
    {
        std::vector< std::string > names;
        std::vector< UnipotentMatrix > gens;
        for (std::size_t m = 0; m < systems.size(); ++m)
            for (std::size_t j = 0; j < systems[m].size(); ++j)
            {
                names.push_back(std::to_string(m + 1) + ":" + systems[m].names()[j]);
                gens.push_back(systems[m].generator(j));
            }
        return GeneratorSystem(n, std::move(names), std::move(gens));
    }

    /// Throws PreconditionError when dimensions disagree or the union of generators is not 2-step nilpotent.
    void validate() const
    {
        if (systems.empty())
            throw PreconditionError("intersection instance without generator sets");
        for (const auto& s : systems)
            if (s.dim() != n)
                throw PreconditionError("generator set dimension differs from the instance dimension");
        if (!is_two_step(combined()))
            throw PreconditionError("generators do not generate a 2-step nilpotent group");
    }
};

/// The subspace W over coordinates l_mj (all letters) and c_mij (i < j in S_m).
struct ConditionSpace
{
    LinearSubspace space;
    std::vector< std::vector< std::size_t > > ell;                               // ell[m][j]: coordinate index
    std::vector< std::vector< std::pair< std::size_t, std::size_t > > > pairs; // pairs[m]: (i, j) with a c-variable
    std::vector< std::vector< std::size_t > > c;                                 // c[m][k]: coordinate of pairs[m][k]

    std::vector< std::string > ell_names() const
    {
        std::vector< std::string > out;
        for (const auto& row : ell)
            for (auto idx : row)
                out.push_back(space.coords()[idx]);
        return out;
    }
};

inline std::string ell_name(std::size_t m, std::size_t j)
{
    return "l" + std::to_string(m + 1) + "." + std::to_string(j + 1);
}

inline std::string c_name(std::size_t m, std::size_t i, std::size_t j)
{
    return "c" + std::to_string(m + 1) + "." + std::to_string(i + 1) + "." + std::to_string(j + 1);
}

/// Equates sum_j l_mj log A_mj + sum_{i<j in S_m} c_mij [log A_mi, log A_mj] across consecutive m,
/// entry by entry above the diagonal. Rows that vanish identically are dropped.
inline ConditionSpace build_condition_space(const IntersectionInstance& inst,
                                            const std::vector< std::vector< std::size_t > >& S)
{
    const std::size_t M = inst.systems.size();
    if (S.size() != M)
        throw PreconditionError("one index set per generator set is required");
    ConditionSpace cs;
    std::vector< std::string > names;
    cs.ell.resize(M);
    cs.pairs.resize(M);
    cs.c.resize(M);
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t j = 0; j < inst.systems[m].size(); ++j)
        {
            cs.ell[m].push_back(names.size());
            names.push_back(ell_name(m, j));
        }
    for (std::size_t m = 0; m < M; ++m)
    {
        const auto& Sm = S[m];
        for (std::size_t a = 0; a < Sm.size(); ++a)
        {
            if (Sm[a] >= inst.systems[m].size() || (a > 0 && Sm[a] <= Sm[a - 1]))
                throw PreconditionError("index sets must be increasing and within the alphabet");
            for (std::size_t b = a + 1; b < Sm.size(); ++b)
            {
                cs.pairs[m].emplace_back(Sm[a], Sm[b]);
                cs.c[m].push_back(names.size());
                names.push_back(c_name(m, Sm[a], Sm[b]));
            }
        }
    }

    const std::size_t n = inst.n;
    std::vector< Row > rows;
    for (std::size_t m = 0; m + 1 < M; ++m)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = r + 1; s < n; ++s)
            {
                Row row(names.size());
                bool nonzero = false;
                for (std::size_t side = 0; side < 2; ++side)
                {
                    const std::size_t mm = m + side;
                    const int sign = side == 0 ? 1 : -1;
                    const auto& sys = inst.systems[mm];
                    for (std::size_t j = 0; j < sys.size(); ++j)
                    {
                        const Rational& v = sys.log(j).matrix()(r, s);
                        if (v != 0)
                        {
                            row[cs.ell[mm][j]] += sign * v;
                            nonzero = true;
                        }
                    }
                    for (std::size_t k = 0; k < cs.pairs[mm].size(); ++k)
                    {
                        const auto [i, j] = cs.pairs[mm][k];
                        const Rational& v = sys.bracket(i, j).matrix()(r, s);
                        if (v != 0)
                        {
                            row[cs.c[mm][k]] += sign * v;
                            nonzero = true;
                        }
                    }
                }
                if (nonzero && std::any_of(row.begin(), row.end(), [](const Rational& v) { return v != 0; }))
                    rows.push_back(std::move(row));
            }
    cs.space = LinearSubspace(std::move(names), std::move(rows));
    return cs;
}

struct IntersectOptions
{
    bool extract_witness = true;
    bool check_two_step = true;
    /// Above this many runs in total, witnesses are checked through bch_log instead of matrix products.
    std::size_t explicit_run_cap = 1000000;
};

/// True when all words evaluate to the same matrix. Products are exact; past the run cap the comparison
/// uses bch_log on the words' statistics, which requires the 2-step hypothesis.
inline bool verify_witness(const IntersectionInstance& inst, const std::vector< WitnessWord >& words,
                           std::size_t explicit_run_cap = 1000000, std::string* method = nullptr)
{
    if (words.size() != inst.systems.size())
        throw PreconditionError("one witness word per generator set is required");
    std::size_t runs = 0;
    for (std::size_t m = 0; m < words.size(); ++m)
    {
        if (words[m].alphabet_size() != inst.systems[m].size())
            throw PreconditionError("witness alphabet does not match its generator set");
        runs += words[m].runs().size();
    }
    if (runs <= explicit_run_cap)
    {
        if (method)
            *method = "product";
        const UnipotentMatrix first = product_of_word(inst.systems[0], words[0]);
        for (std::size_t m = 1; m < words.size(); ++m)
            if (!(product_of_word(inst.systems[m], words[m]) == first))
                return false;
        return true;
    }
    if (method)
        *method = "bch";
    const NilpotentMatrix first = bch_log(inst.systems[0], parikh(words[0]), delta_table(words[0]));
    for (std::size_t m = 1; m < words.size(); ++m)
        if (!(bch_log(inst.systems[m], parikh(words[m]), delta_table(words[m])) == first))
            return false;
    return true;
}

struct IntersectionWitness
{
    std::vector< WitnessWord > words;
    UnipotentMatrix common;
    BigInt scale;
    std::string verification;
};

namespace detail
{
// Smallest even N = 2t with pred(N), for a predicate that is monotone in N and eventually true.
template < class Pred > BigInt minimal_even_scale(Pred pred)
{
    BigInt hi = 1;
    while (!pred(BigInt(2 * hi)))
        hi *= 2;
    BigInt lo = hi / 2; // pred(2 lo) false unless lo == 0
    if (hi == 1)
        return 2;
    while (hi - lo > 1)
    {
        BigInt mid = (lo + hi) / 2;
        if (pred(BigInt(2 * mid)))
            hi = mid;
        else
            lo = mid;
    }
    return 2 * hi;
}
} // namespace detail

/// Words w_1..w_M with equal products, given the final index sets and a point of Lambda with support S.
///
/// c is solved from W with l fixed, both are cleared of denominators, and the smallest even N meeting the
/// realization bound (with K the size of each S_m) scales them before realize_word runs on S_m's letters.
inline IntersectionWitness extract_witness(const IntersectionInstance& inst, const std::vector< std::vector< std::size_t > >& S,
                                           const std::vector< BigInt >& ell_point, const IntersectOptions& opt = {})
{
    const ConditionSpace cs = build_condition_space(inst, S);
    const std::size_t M = inst.systems.size();
    const std::size_t nvars = cs.space.coords().size();

    std::vector< bool > is_ell(nvars, false);
    std::size_t pos = 0;
    Row fixed(nvars);
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t j = 0; j < cs.ell[m].size(); ++j)
        {
            is_ell[cs.ell[m][j]] = true;
            fixed[cs.ell[m][j]] = Rational(ell_point.at(pos++));
        }
    if (pos != ell_point.size())
        throw PreconditionError("point length differs from the number of l-coordinates");
    for (std::size_t m = 0; m < M; ++m)
    {
        std::size_t k = 0;
        for (std::size_t j = 0; j < cs.ell[m].size(); ++j)
        {
            const bool positive = fixed[cs.ell[m][j]] > 0;
            const bool in_set = k < S[m].size() && S[m][k] == j;
            if (in_set)
                ++k;
            if (positive != in_set || fixed[cs.ell[m][j]] < 0)
                throw PreconditionError("point support must equal the index sets");
        }
        if (S[m].empty())
            throw PreconditionError("witness extraction needs non-empty index sets");
    }

    // solve E_c c = -E_l l
    std::vector< std::size_t > cvars;
    for (std::size_t v = 0; v < nvars; ++v)
        if (!is_ell[v])
            cvars.push_back(v);
    std::vector< Row > A;
    Row b;
    for (const auto& eq : cs.space.equations())
    {
        Row r(cvars.size());
        for (std::size_t k = 0; k < cvars.size(); ++k)
            r[k] = eq[cvars[k]];
        Rational rhs = 0;
        for (std::size_t v = 0; v < nvars; ++v)
            if (is_ell[v] && eq[v] != 0)
                rhs -= eq[v] * fixed[v];
        A.push_back(std::move(r));
        b.push_back(std::move(rhs));
    }
    const auto csol = solve_particular(A, b, cvars.size());
    if (!csol)
        throw InternalError("support point does not lie in the projection of W");
    Row full = fixed;
    for (std::size_t k = 0; k < cvars.size(); ++k)
        full[cvars[k]] = (*csol)[k];
    const std::vector< BigInt > scaled = clear_denominators(full);

    auto pred = [&](const BigInt& N) {
        for (std::size_t m = 0; m < M; ++m)
        {
            const std::size_t Kp = S[m].size();
            for (std::size_t k = 0; k < cs.pairs[m].size(); ++k)
            {
                const auto [i, j] = cs.pairs[m][k];
                if (!within_realization_bound(N * scaled[cs.ell[m][i]], N * scaled[cs.ell[m][j]],
                                              2 * N * scaled[cs.c[m][k]], Kp))
                    return false;
            }
        }
        return true;
    };
    const BigInt N = detail::minimal_even_scale(pred);

    IntersectionWitness out{{}, UnipotentMatrix::identity(inst.n), N, {}};
    for (std::size_t m = 0; m < M; ++m)
    {
        const std::size_t Kp = S[m].size();
        ParikhVector counts{std::vector< BigInt >(Kp)};
        for (std::size_t a = 0; a < Kp; ++a)
            counts[a] = N * scaled[cs.ell[m][S[m][a]]];
        DeltaTable targets(Kp);
        std::size_t k = 0;
        for (std::size_t a = 0; a < Kp; ++a)
            for (std::size_t bidx = a + 1; bidx < Kp; ++bidx, ++k)
                targets.at(a, bidx) = 2 * N * scaled[cs.c[m][k]];
        const WitnessWord local = realize_word(counts, targets);
        WitnessWord w(inst.systems[m].size());
        for (const auto& run : local.runs())
            w.append(S[m][run.letter], run.count);
        out.words.push_back(std::move(w));
    }
    if (!verify_witness(inst, out.words, opt.explicit_run_cap, &out.verification))
        throw InternalError("extracted witness words do not evaluate to a common element");
    if (out.verification == "product")
        out.common = product_of_word(inst.systems[0], out.words[0]);
    else
        out.common = exp_nilpotent(bch_log(inst.systems[0], parikh(out.words[0]), delta_table(out.words[0])));
    return out;
}

/// Decides whether the semigroups generated by the M sets intersect, refining index sets S_m by the support
/// of the nonnegative integer points of the projection of W until they are stable.
inline Decision decide_intersection(const IntersectionInstance& inst, const IntersectOptions& opt = {})
{
    if (opt.check_two_step)
        inst.validate();
    const std::size_t M = inst.systems.size();
    std::vector< std::vector< std::size_t > > S(M);
    std::size_t total = 0;
    for (std::size_t m = 0; m < M; ++m)
    {
        for (std::size_t j = 0; j < inst.systems[m].size(); ++j)
            S[m].push_back(j);
        total += S[m].size();
    }

    Decision d;
    d.route = "algorithm";
    SupportResult last;
    for (std::size_t iter = 0;; ++iter)
    {
        if (iter > total + 1)
            throw InternalError("support refinement did not stabilize within the proven iteration bound");
        const ConditionSpace cs = build_condition_space(inst, S);
        const LinearSubspace proj = eliminate(cs.space, cs.ell_names());
        last = support_nonneg(proj);

        IterationRecord rec;
        rec.sets = S;
        rec.equations = cs.space.equations().size();
        rec.projected_equations = proj.equations().size();
        rec.lp_calls = last.lp_calls;
        rec.support.resize(M);
        std::vector< std::vector< std::size_t > > next(M);
        bool changed = false;
        std::size_t offset = 0;
        for (std::size_t m = 0; m < M; ++m)
        {
            for (std::size_t j = 0; j < inst.systems[m].size(); ++j)
                if (last.in_support[offset + j])
                    rec.support[m].push_back(j);
            for (auto j : S[m])
                if (last.in_support[offset + j])
                    next[m].push_back(j);
            changed = changed || next[m].size() != S[m].size();
            offset += inst.systems[m].size();
        }
        d.iterations.push_back(std::move(rec));
        if (!changed)
            break;
        S = std::move(next);
    }

    for (const auto& Sm : S)
        if (Sm.empty())
        {
            d.verdict = Verdict::Empty;
            return d;
        }
    d.verdict = Verdict::NonEmpty;
    if (opt.extract_witness)
    {
        IntersectionWitness w = extract_witness(inst, S, last.full_support_point, opt);
        d.witnesses = std::move(w.words);
        d.common_element = std::move(w.common);
        d.scale = std::move(w.scale);
        d.verification = std::move(w.verification);
    }
    return d;
}

} // namespace nilsemi

#endif // NILSEMI_INTERSECT_HPP
