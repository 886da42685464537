#ifndef NILSEMI_DECISION_HPP
#define NILSEMI_DECISION_HPP

#include "nilsemi/matlie.hpp"
#include "nilsemi/rational.hpp"
#include "nilsemi/word.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nilsemi
{

enum class Verdict
{
    Empty,
    NonEmpty
};

inline const char* to_string(Verdict v) { return v == Verdict::Empty ? "Empty" : "NonEmpty"; }

/// One pass of the support-refinement loop.
struct IterationRecord
{
    std::vector< std::vector< std::size_t > > sets;    // S_m at the start of the pass (0-based letters)
    std::vector< std::vector< std::size_t > > support; // supp(Lambda) restricted to system m
    std::size_t equations = 0;                         // equations of W after dropping zero rows
    std::size_t projected_equations = 0;               // equations of the projection onto the l-coordinates
    std::size_t lp_calls = 0;
};

struct Decision
{
    Verdict verdict = Verdict::Empty;
    /// Intersection: one word per generator set. Orbit: (v over G, w over H).
    std::vector< WitnessWord > witnesses;
    /// The shared element, T v = S w for orbits.
    std::optional< UnipotentMatrix > common_element;
    std::vector< IterationRecord > iterations;
    std::vector< std::string > trace;
    /// Which procedure produced the verdict (e.g. "algorithm", "easy", "hard", "abelian").
    std::string route;
    /// How the witness was checked: "product" (exact matrices) or "bch" (statistics); empty when none.
    std::string verification;
    /// Scaling factor applied before word realization, when applicable.
    std::optional< BigInt > scale;
};

} // namespace nilsemi

#endif // NILSEMI_DECISION_HPP
