#ifndef NILSEMI_ORBIT_HPP
#define NILSEMI_ORBIT_HPP

#include "nilsemi/decision.hpp"
#include "nilsemi/intersect.hpp"
#include "nilsemi/linsolve.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/rational.hpp"
#include "nilsemi/word.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilsemi
{

/// Element of H_3(Q) by its coordinates: the matrix [[1,a,c],[0,1,b],[0,0,1]].
struct H3Elem
{
    Rational a = 0, b = 0, c = 0;

    UnipotentMatrix matrix() const { return h3(a, b, c); }

    static H3Elem from_matrix(const UnipotentMatrix& m)
    {
        if (m.dim() != 3)
            throw PreconditionError("H3 elements are 3x3");
        return {m.matrix()(0, 1), m.matrix()(1, 2), m.matrix()(0, 2)};
    }

    friend bool operator==(const H3Elem&, const H3Elem&) = default;
};

/// Superdiagonal pair and corner of a 3x3 Lie algebra element.
struct H3Projection
{
    Vec2 phi;
    Rational pi;
};

inline H3Projection h3_project(const NilpotentMatrix& X)
{
    if (X.dim() != 3)
        throw PreconditionError("phi/pi projections are defined on 3x3 matrices only");
    const Matrix& m = X.matrix();
    return {Vec2{m(0, 1), m(1, 2)}, m(0, 2)};
}

/// Decide whether T <G> meets S <H> inside H_3(Q).
struct OrbitInstance
{
    H3Elem T, S;
    GeneratorSystem G, H;

    void validate() const
    {
        if (G.dim() != 3 || H.dim() != 3)
            throw PreconditionError("orbit intersection is decided in H3(Q) only (dimension 3)");
    }
};

/// Replaces S by T^{-1} S and T by I.
inline OrbitInstance reduce_to_identity(const OrbitInstance& inst)
{
    OrbitInstance out = inst;
    out.S = H3Elem::from_matrix(inverse(inst.T.matrix()) * inst.S.matrix());
    out.T = H3Elem{};
    return out;
}

/// Integer solution of the relaxed system: linear part, corner equation, and parities c = x_i x_j, d = y_i y_j (mod 2).
struct RelaxedSolution
{
    std::vector< BigInt > x, y;
    DeltaTable c, d;
};

struct OrbitOptions
{
    std::size_t skeleton_budget = 100000;
    /// Largest K + M for the 2^{K+M} parity branches.
    std::size_t hard_cap = 16;
    IlpOptions ilp;
    bool extract_witness = true;
};

namespace detail
{
// (a, b, c) coordinates of a 3x3 Lie algebra element.
struct Lie3
{
    Rational a = 0, b = 0, c = 0;

    Rational& operator[](std::size_t k) { return k == 0 ? a : (k == 1 ? b : c); }
    const Rational& operator[](std::size_t k) const { return k == 0 ? a : (k == 1 ? b : c); }

    friend Lie3 operator+(Lie3 x, const Lie3& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
    friend Lie3 operator-(Lie3 x, const Lie3& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
    friend Lie3 operator*(const Rational& s, const Lie3& x) { return {s * x.a, s * x.b, s * x.c}; }
};

inline Lie3 lie3(const NilpotentMatrix& X)
{
    const auto p = h3_project(X);
    return {p.phi[0], p.phi[1], p.pi};
}

inline Lie3 br(const Lie3& x, const Lie3& y) { return {0, 0, x.a * y.b - x.b * y.a}; }

inline Lie3 log3(const H3Elem& s) { return {s.a, s.b, s.c - s.a * s.b / 2}; }

// Integer rows from rational rows with right-hand sides, one lcm per row.
inline void integer_rows(const std::vector< Row >& rows, const Row& rhs, std::vector< IntRow >& A, IntRow& b)
{
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        Row full = rows[r];
        full.push_back(rhs[r]);
        auto ints = clear_denominators(full);
        b.push_back(ints.back());
        ints.pop_back();
        A.push_back(std::move(ints));
    }
}

struct EasyPlan
{
    std::vector< std::size_t > g0, gplus, h0, hplus;
};

// Linear Diophantine system for v = v_0 C_1 v_1 ... C_s v_s and w = w_0 D_1 ... D_t w_t, where the blocks
// v_i, w_i are products of pairwise commuting letters. Returns a witness pair if the system has a
// nonnegative solution with v, w non-empty.
inline std::optional< std::pair< WitnessWord, WitnessWord > >
solve_skeleton(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H, const EasyPlan& plan,
               const std::vector< std::size_t >& Cs, const std::vector< std::size_t >& Ds, const IlpOptions& ilp)
{
    const std::size_t s = Cs.size(), t = Ds.size();
    const std::size_t K0 = plan.g0.size(), M0 = plan.h0.size();
    if ((s == 0 && K0 == 0) || (t == 0 && M0 == 0))
        return std::nullopt;
    const Lie3 logS = log3(S);
    std::vector< Lie3 > A(G.size()), B(H.size());
    for (std::size_t i = 0; i < G.size(); ++i)
        A[i] = lie3(G.log(i));
    for (std::size_t i = 0; i < H.size(); ++i)
        B[i] = lie3(H.log(i));

    const Rational half = make_rational(1, 2);
    const std::size_t nx = (s + 1) * K0, ny = (t + 1) * M0;
    std::vector< Lie3 > coef(nx + ny);
    Lie3 lhs_const, rhs_const = logS;
    for (std::size_t k = 0; k < s; ++k)
    {
        lhs_const = lhs_const + A[Cs[k]];
        for (std::size_t l = k + 1; l < s; ++l)
            lhs_const = lhs_const + half * br(A[Cs[k]], A[Cs[l]]);
    }
    for (std::size_t i = 0; i <= s; ++i)
        for (std::size_t j = 0; j < K0; ++j)
        {
            const Lie3& X = A[plan.g0[j]];
            Lie3 v = X;
            for (std::size_t k = 0; k < s; ++k)
                v = v + half * (k < i ? br(A[Cs[k]], X) : br(X, A[Cs[k]]));
            coef[i * K0 + j] = v;
        }
    Lie3 wlin;
    for (std::size_t k = 0; k < t; ++k)
    {
        rhs_const = rhs_const + B[Ds[k]];
        wlin = wlin + B[Ds[k]];
        for (std::size_t l = k + 1; l < t; ++l)
            rhs_const = rhs_const + half * br(B[Ds[k]], B[Ds[l]]);
    }
    rhs_const = rhs_const + half * br(logS, wlin);
    for (std::size_t i = 0; i <= t; ++i)
        for (std::size_t j = 0; j < M0; ++j)
        {
            const Lie3& Y = B[plan.h0[j]];
            Lie3 v = Y + half * br(logS, Y);
            for (std::size_t k = 0; k < t; ++k)
                v = v + half * (k < i ? br(B[Ds[k]], Y) : br(Y, B[Ds[k]]));
            coef[nx + i * M0 + j] = Rational(-1) * v;
        }

    std::vector< Row > rows;
    Row rhs;
    for (std::size_t comp = 0; comp < 3; ++comp)
    {
        Row r(nx + ny);
        bool nz = false;
        for (std::size_t v = 0; v < nx + ny; ++v)
        {
            r[v] = coef[v][comp];
            nz = nz || r[v] != 0;
        }
        const Rational value = rhs_const[comp] - lhs_const[comp];
        if (!nz && value == 0)
            continue;
        rows.push_back(std::move(r));
        rhs.push_back(value);
    }
    std::vector< IntRow > Ai;
    IntRow bi;
    integer_rows(rows, rhs, Ai, bi);
    std::vector< std::vector< std::size_t > > groups;
    if (s == 0)
    {
        groups.emplace_back();
        for (std::size_t j = 0; j < K0; ++j)
            groups.back().push_back(j);
    }
    if (t == 0)
    {
        groups.emplace_back();
        for (std::size_t j = 0; j < M0; ++j)
            groups.back().push_back(nx + j);
    }
    const auto sol = ilp_feasible_nonneg(Ai, bi, nx + ny, groups, ilp);
    if (!sol)
        return std::nullopt;

    WitnessWord v(G.size()), w(H.size());
    for (std::size_t i = 0; i <= s; ++i)
    {
        for (std::size_t j = 0; j < K0; ++j)
            v.append(plan.g0[j], (*sol)[i * K0 + j]);
        if (i < s)
            v.append(Cs[i]);
    }
    for (std::size_t i = 0; i <= t; ++i)
    {
        for (std::size_t j = 0; j < M0; ++j)
            w.append(plan.h0[j], (*sol)[nx + i * M0 + j]);
        if (i < t)
            w.append(Ds[i]);
    }
    return std::make_pair(std::move(v), std::move(w));
}

inline bool bracket_free(const GeneratorSystem& sys)
{
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = i + 1; j < sys.size(); ++j)
            if (!sys.bracket(i, j).matrix().is_zero())
                return false;
    return true;
}

inline Cone2D phi_cone(const GeneratorSystem& sys)
{
    Cone2D c;
    for (std::size_t i = 0; i < sys.size(); ++i)
        c.generators.push_back(h3_project(sys.log(i)).phi);
    return c;
}

inline void check_pair(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H, const WitnessWord& v,
                       const WitnessWord& w, const char* where)
{
    if (!(product_of_word(G, v) == S.matrix() * product_of_word(H, w)))
        throw InternalError(std::string(where) + ": witness pair does not satisfy v = S w");
}

// Easy route with a given separating functional n (n.phi >= 0 on G, <= 0 on H).
inline Decision decide_easy_with(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H, const Vec2& n,
                                 const OrbitOptions& opt)
{
    Decision d;
    d.route = "easy";
    EasyPlan plan;
    std::vector< Rational > wg, wh; // positive weights of the G+ and H+ letters
    for (std::size_t i = 0; i < G.size(); ++i)
    {
        const Vec2 p = h3_project(G.log(i)).phi;
        const Rational v = n[0] * p[0] + n[1] * p[1];
        if (v < 0)
            throw PreconditionError("functional is negative on a generator of G");
        if (v == 0)
            plan.g0.push_back(i);
        else
            plan.gplus.push_back(i), wg.push_back(v);
    }
    for (std::size_t i = 0; i < H.size(); ++i)
    {
        const Vec2 p = h3_project(H.log(i)).phi;
        const Rational v = n[0] * p[0] + n[1] * p[1];
        if (v > 0)
            throw PreconditionError("functional is positive on a generator of H");
        if (v == 0)
            plan.h0.push_back(i);
        else
            plan.hplus.push_back(i), wh.push_back(-v);
    }
    const Rational target = n[0] * S.a + n[1] * S.b;
    d.trace.push_back("separator n = (" + to_string(n[0]) + ", " + to_string(n[1]) + "), n.phi(log S) = " +
                      to_string(target) + ", |G0| = " + std::to_string(plan.g0.size()) + ", |G+| = " +
                      std::to_string(plan.gplus.size()) + ", |H0| = " + std::to_string(plan.h0.size()) +
                      ", |H+| = " + std::to_string(plan.hplus.size()));
    d.verdict = Verdict::Empty;
    if (target < 0)
    {
        d.trace.push_back("weighted letter count would be negative: no skeleton");
        return d;
    }
    Rational min_w = 0;
    for (const auto& v : wg)
        if (min_w == 0 || v < min_w)
            min_w = v;
    for (const auto& v : wh)
        if (min_w == 0 || v < min_w)
            min_w = v;
    const BigInt max_len = min_w == 0 ? BigInt(0) : floor_of(target / min_w);
    if (!max_len.fits_ulong_p() || max_len.get_ui() > opt.skeleton_budget)
        throw BudgetExceeded("skeleton length bound " + to_string(max_len) + " exceeds the enumeration budget",
                             "skeleton-budget=" + std::to_string(opt.skeleton_budget));
    const std::size_t L_max = max_len.get_ui();
    d.trace.push_back("skeleton length bound " + std::to_string(L_max));

    std::size_t visited = 0;
    std::optional< std::pair< WitnessWord, WitnessWord > > found;
    std::vector< std::size_t > Cs, Ds;

    // Ds of length t with total weight exactly `rest`
    std::function< bool(std::size_t, const Rational&) > fill_h = [&](std::size_t t, const Rational& rest) -> bool {
        if (t == 0)
        {
            if (rest != 0)
                return false;
            if (++visited > opt.skeleton_budget)
                throw BudgetExceeded("skeleton enumeration exceeded its budget",
                                     "skeleton-budget=" + std::to_string(opt.skeleton_budget));
            found = solve_skeleton(S, G, H, plan, Cs, Ds, opt.ilp);
            return found.has_value();
        }
        for (std::size_t k = 0; k < plan.hplus.size(); ++k)
        {
            if (wh[k] > rest)
                continue;
            Ds.push_back(plan.hplus[k]);
            const bool ok = fill_h(t - 1, rest - wh[k]);
            Ds.pop_back();
            if (ok)
                return true;
        }
        return false;
    };
    std::function< bool(std::size_t, std::size_t, const Rational&) > fill_g = [&](std::size_t s, std::size_t t,
                                                                              const Rational& rest) -> bool {
        if (s == 0)
            return fill_h(t, rest);
        for (std::size_t k = 0; k < plan.gplus.size(); ++k)
        {
            if (wg[k] > rest)
                continue;
            Cs.push_back(plan.gplus[k]);
            const bool ok = fill_g(s - 1, t, rest - wg[k]);
            Cs.pop_back();
            if (ok)
                return true;
        }
        return false;
    };

    for (std::size_t L = 0; L <= L_max && !found; ++L)
        for (std::size_t s = 0; s <= L && !found; ++s)
            fill_g(s, L - s, target);
    d.trace.push_back("skeletons examined: " + std::to_string(visited));
    if (found)
    {
        check_pair(S, G, H, found->first, found->second, "easy route");
        d.verdict = Verdict::NonEmpty;
        d.witnesses = {std::move(found->first), std::move(found->second)};
        d.verification = "product";
    }
    return d;
}

// Strictly positive integers X, Y with sum X phi(A) = sum Y phi(B), if they exist.
inline std::optional< std::pair< std::vector< BigInt >, std::vector< BigInt > > >
positive_relation(const GeneratorSystem& G, const GeneratorSystem& H)
{
    const std::size_t K = G.size(), M = H.size();
    if (K == 0 || M == 0)
        return std::nullopt;
    LinearProgram lp(K + M);
    for (std::size_t comp = 0; comp < 2; ++comp)
    {
        Row r(K + M);
        for (std::size_t i = 0; i < K; ++i)
            r[i] = h3_project(G.log(i)).phi[comp];
        for (std::size_t j = 0; j < M; ++j)
            r[K + j] = -h3_project(H.log(j)).phi[comp];
        lp.add_equality(std::move(r), 0);
    }
    for (std::size_t v = 0; v < K + M; ++v)
        lp.lower[v] = Rational(1);
    const auto sol = lp_feasible(lp);
    if (!sol)
        return std::nullopt;
    auto ints = clear_denominators(*sol);
    std::vector< BigInt > X(ints.begin(), ints.begin() + static_cast< std::ptrdiff_t >(K));
    std::vector< BigInt > Y(ints.begin() + static_cast< std::ptrdiff_t >(K), ints.end());
    return std::make_pair(std::move(X), std::move(Y));
}
} // namespace detail

/// Integer solution of the relaxed system, by enumerating the parities of x and y and solving each branch
/// exactly over Z with the Hermite form. nullopt when no branch is feasible.
inline std::optional< RelaxedSolution > solve_relaxed(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H,
                                                      const OrbitOptions& opt = {}, std::size_t* branches = nullptr)
{
    using detail::Lie3;
    const std::size_t K = G.size(), M = H.size();
    if (K + M > opt.hard_cap)
        throw BudgetExceeded("parity branching over " + std::to_string(K + M) + " letters exceeds the cap",
                             "hard-cap=" + std::to_string(opt.hard_cap));
    const std::size_t PG = K * (K ? K - 1 : 0) / 2, PH = M * (M ? M - 1 : 0) / 2;
    const std::size_t nv = K + M + PG + PH;
    const Lie3 logS = detail::log3(S);
    const Rational half = make_rational(1, 2);

    std::vector< Row > rows(3, Row(nv));
    Row rhs{logS.a, logS.b, logS.c};
    for (std::size_t i = 0; i < K; ++i)
    {
        const Lie3 a = detail::lie3(G.log(i));
        rows[0][i] = a.a, rows[1][i] = a.b, rows[2][i] = a.c;
    }
    for (std::size_t j = 0; j < M; ++j)
    {
        const Lie3 b = detail::lie3(H.log(j));
        const Lie3 e = b + half * detail::br(logS, b);
        rows[0][K + j] = -e.a, rows[1][K + j] = -e.b, rows[2][K + j] = -e.c;
    }
    std::size_t v = K + M;
    std::vector< std::pair< std::size_t, std::size_t > > gp, hp;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j, ++v)
        {
            gp.emplace_back(i, j);
            rows[2][v] = half * h3_project(G.bracket(i, j)).pi;
        }
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i + 1; j < M; ++j, ++v)
        {
            hp.emplace_back(i, j);
            rows[2][v] = -half * h3_project(H.bracket(i, j)).pi;
        }
    std::vector< IntRow > A;
    IntRow b;
    detail::integer_rows(rows, rhs, A, b);

    const std::size_t nb = std::size_t(1) << (K + M);
    std::size_t tried = 0;
    std::optional< RelaxedSolution > out;
    for (std::size_t mask = 0; mask < nb && !out; ++mask)
    {
        ++tried;
        std::vector< int > r(nv, 0);
        for (std::size_t k = 0; k < K + M; ++k)
            r[k] = (mask >> k) & 1;
        for (std::size_t p = 0; p < gp.size(); ++p)
            r[K + M + p] = r[gp[p].first] * r[gp[p].second];
        for (std::size_t p = 0; p < hp.size(); ++p)
            r[K + M + PG + p] = r[K + hp[p].first] * r[K + hp[p].second];
        std::vector< IntRow > A2 = A;
        IntRow b2 = b;
        for (std::size_t row = 0; row < A2.size(); ++row)
            for (std::size_t k = 0; k < nv; ++k)
            {
                if (r[k])
                    b2[row] -= A2[row][k];
                A2[row][k] *= 2;
            }
        const auto sol = hnf_solve(A2, b2, nv);
        if (!sol)
            continue;
        RelaxedSolution rs{std::vector< BigInt >(K), std::vector< BigInt >(M), DeltaTable(K), DeltaTable(M)};
        auto value = [&](std::size_t k) { return BigInt(2 * sol->particular[k] + r[k]); };
        for (std::size_t i = 0; i < K; ++i)
            rs.x[i] = value(i);
        for (std::size_t j = 0; j < M; ++j)
            rs.y[j] = value(K + j);
        for (std::size_t p = 0; p < gp.size(); ++p)
            rs.c.at(gp[p].first, gp[p].second) = value(K + M + p);
        for (std::size_t p = 0; p < hp.size(); ++p)
            rs.d.at(hp[p].first, hp[p].second) = value(K + M + PG + p);
        out = std::move(rs);
    }
    if (branches)
        *branches = tried;
    return out;
}

/// Witness pair (v, w) with v = S w built from a relaxed solution: shift along a strictly positive relation
/// and a corner-balancing bracket combination until the realization bounds hold, then realize both words.
inline std::pair< WitnessWord, WitnessWord > extract_orbit_witness(const H3Elem& S, const GeneratorSystem& G,
                                                                   const GeneratorSystem& H, const RelaxedSolution& sol,
                                                                   BigInt* scale_out = nullptr)
{
    using detail::Lie3;
    const std::size_t K = G.size(), M = H.size();
    const auto rel = detail::positive_relation(G, H);
    if (!rel)
        throw PreconditionError("no strictly positive relation between the phi-images of G and H");
    const auto& [X, Y] = *rel;

    DeltaTable Cc(K), Dd(M);
    Rational Dval = 0;
    for (std::size_t i = 0; i < K && Dval == 0; ++i)
        for (std::size_t j = i + 1; j < K && Dval == 0; ++j)
        {
            const Rational p = h3_project(G.bracket(i, j)).pi;
            if (p != 0)
            {
                Cc.at(i, j) = sign_of(p);
                Dval = abs(p);
            }
        }
    for (std::size_t i = 0; i < M && Dval == 0; ++i)
        for (std::size_t j = i + 1; j < M && Dval == 0; ++j)
        {
            const Rational p = h3_project(H.bracket(i, j)).pi;
            if (p != 0)
            {
                Dd.at(i, j) = sign_of(p);
                Dval = abs(p);
            }
        }
    if (Dval == 0)
        throw PreconditionError("all brackets vanish; the shift construction needs a non-zero bracket");

    const Lie3 logS = detail::log3(S);
    const Rational half = make_rational(1, 2);
    std::vector< Rational > dens;
    auto collect = [&](const Lie3& x) {
        dens.push_back(x.a), dens.push_back(x.b), dens.push_back(x.c);
    };
    collect(logS);
    for (std::size_t i = 0; i < K; ++i)
        collect(detail::lie3(G.log(i)));
    for (std::size_t j = 0; j < M; ++j)
    {
        collect(detail::lie3(H.log(j)));
        collect(half * detail::br(logS, detail::lie3(H.log(j))));
    }
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
            collect(half * detail::lie3(G.bracket(i, j)));
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i + 1; j < M; ++j)
            collect(half * detail::lie3(H.bracket(i, j)));
    const BigInt E = common_denominator(dens);

    Rational Q = 0;
    for (std::size_t i = 0; i < K; ++i)
        Q += Rational(X[i]) * h3_project(G.log(i)).pi;
    for (std::size_t j = 0; j < M; ++j)
    {
        const Lie3 b = detail::lie3(H.log(j));
        Q -= Rational(Y[j]) * (b + half * detail::br(logS, b)).c;
    }
    const Rational DE = Dval * Rational(E), QE = Q * Rational(E);
    if (!is_integer(DE) || !is_integer(QE))
        throw InternalError("common denominator does not clear D or the corner defect");
    const BigInt de = DE.get_num(), qe = QE.get_num();

    auto shifted = [&](const BigInt& N, std::vector< BigInt >& xs, std::vector< BigInt >& ys, DeltaTable& cs,
                       DeltaTable& ds) {
        xs.resize(K), ys.resize(M);
        for (std::size_t i = 0; i < K; ++i)
            xs[i] = sol.x[i] + 2 * N * de * X[i];
        for (std::size_t j = 0; j < M; ++j)
            ys[j] = sol.y[j] + 2 * N * de * Y[j];
        cs = DeltaTable(K), ds = DeltaTable(M);
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = i + 1; j < K; ++j)
                cs.at(i, j) = sol.c.at(i, j) - 4 * N * Cc.at(i, j) * qe;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i + 1; j < M; ++j)
                ds.at(i, j) = sol.d.at(i, j) + 4 * N * Dd.at(i, j) * qe;
    };
    auto pred = [&](const BigInt& N) {
        std::vector< BigInt > xs, ys;
        DeltaTable cs, ds;
        shifted(N, xs, ys, cs, ds);
        for (const auto& v : xs)
            if (v <= 0)
                return false;
        for (const auto& v : ys)
            if (v <= 0)
                return false;
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = i + 1; j < K; ++j)
                if (!within_realization_bound(xs[i], xs[j], cs.at(i, j), K))
                    return false;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i + 1; j < M; ++j)
                if (!within_realization_bound(ys[i], ys[j], ds.at(i, j), M))
                    return false;
        return true;
    };
    BigInt hi = 1;
    while (!pred(hi))
        hi *= 2;
    BigInt lo = hi / 2;
    while (hi - lo > 1)
    {
        BigInt mid = (lo + hi) / 2;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    std::vector< BigInt > xs, ys;
    DeltaTable cs, ds;
    shifted(hi, xs, ys, cs, ds);
    if (scale_out)
        *scale_out = hi;
    WitnessWord v = realize_word(ParikhVector{xs}, cs);
    WitnessWord w = realize_word(ParikhVector{ys}, ds);
    detail::check_pair(S, G, H, v, w, "shift construction");
    return {std::move(v), std::move(w)};
}

/// Easy route: requires a functional n != 0 with n.phi >= 0 on G and <= 0 on H, and raises Unsupported otherwise.
inline Decision decide_easy(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H,
                            const OrbitOptions& opt = {})
{
    const ConeIntersection ci = cone_intersect_dim(detail::phi_cone(G), detail::phi_cone(H));
    if (!ci.separator)
        throw Unsupported("no functional separates the phi-cones of G and H; the easy route does not apply");
    return detail::decide_easy_with(S, G, H, *ci.separator, opt);
}

/// Hard route: parity branches over the relaxed system, then the shift construction for a witness.
/// Requires a strictly positive relation between the phi-images and a non-zero bracket.
inline Decision decide_hard(const H3Elem& S, const GeneratorSystem& G, const GeneratorSystem& H,
                            const OrbitOptions& opt = {})
{
    if (detail::bracket_free(G) && detail::bracket_free(H))
        throw PreconditionError("hard route needs a non-zero bracket among the generators");
    if (!detail::positive_relation(G, H))
        throw PreconditionError("hard route needs a strictly positive relation between the phi-images");
    Decision d;
    d.route = "hard";
    std::size_t branches = 0;
    const auto sol = solve_relaxed(S, G, H, opt, &branches);
    d.trace.push_back("parity branches examined: " + std::to_string(branches));
    if (!sol)
    {
        d.verdict = Verdict::Empty;
        return d;
    }
    d.verdict = Verdict::NonEmpty;
    std::string xs;
    for (const auto& v : sol->x)
        xs += (xs.empty() ? "" : ",") + to_string(v);
    std::string ys;
    for (const auto& v : sol->y)
        ys += (ys.empty() ? "" : ",") + to_string(v);
    d.trace.push_back("relaxed solution x = (" + xs + "), y = (" + ys + ")");
    if (opt.extract_witness)
    {
        BigInt N;
        auto [v, w] = extract_orbit_witness(S, G, H, *sol, &N);
        d.witnesses = {std::move(v), std::move(w)};
        d.scale = N;
        d.verification = "product";
    }
    return d;
}

/// Decides whether T <G> meets S <H> in H_3(Q).
///
/// After moving T to the identity: a separating functional selects the easy route; without one the phi-images
/// admit a strictly positive relation, so the hard route applies whenever some bracket is non-zero; if all
/// brackets vanish both semigroups are abelian and one linear Diophantine system decides.
inline Decision decide_orbit(const OrbitInstance& inst, const OrbitOptions& opt = {})
{
    inst.validate();
    const OrbitInstance red = reduce_to_identity(inst);
    if (red.G.size() == 0 || red.H.size() == 0)
    {
        Decision d;
        d.route = "trivial";
        d.trace.push_back("an empty alphabet generates the empty semigroup");
        return d;
    }
    const ConeIntersection ci = cone_intersect_dim(detail::phi_cone(red.G), detail::phi_cone(red.H));
    Decision d;
    if (ci.separator)
        d = detail::decide_easy_with(red.S, red.G, red.H, *ci.separator, opt);
    else if (!detail::bracket_free(red.G) || !detail::bracket_free(red.H))
        d = decide_hard(red.S, red.G, red.H, opt);
    else
    {
        d.route = "abelian";
        d.verdict = Verdict::Empty;
        detail::EasyPlan plan;
        for (std::size_t i = 0; i < red.G.size(); ++i)
            plan.g0.push_back(i);
        for (std::size_t j = 0; j < red.H.size(); ++j)
            plan.h0.push_back(j);
        if (auto found = detail::solve_skeleton(red.S, red.G, red.H, plan, {}, {}, opt.ilp))
        {
            detail::check_pair(red.S, red.G, red.H, found->first, found->second, "abelian route");
            d.verdict = Verdict::NonEmpty;
            d.witnesses = {std::move(found->first), std::move(found->second)};
            d.verification = "product";
        }
    }
    d.trace.insert(d.trace.begin(), "cone intersection dimension " + std::to_string(ci.dim) + ", route " + d.route);
    if (d.verdict == Verdict::NonEmpty && d.witnesses.size() == 2)
    {
        const UnipotentMatrix left = inst.T.matrix() * product_of_word(inst.G, d.witnesses[0]);
        const UnipotentMatrix right = inst.S.matrix() * product_of_word(inst.H, d.witnesses[1]);
        if (!(left == right))
            throw InternalError("orbit witness fails T v = S w on the original instance");
        d.common_element = left;
    }
    return d;
}

/// True when T * product(v) = S * product(w) exactly.
inline bool verify_orbit_witness(const OrbitInstance& inst, const WitnessWord& v, const WitnessWord& w)
{
    if (v.empty() || w.empty())
        return false;
    return inst.T.matrix() * product_of_word(inst.G, v) == inst.S.matrix() * product_of_word(inst.H, w);
}

} // namespace nilsemi

#endif // NILSEMI_ORBIT_HPP
