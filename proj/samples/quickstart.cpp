// Builds two generator sets in H3(Q), decides whether their semigroups meet and prints a witness.
#include <nilsemi.hpp>

#include <iostream>

int main()
{
    using namespace nilsemi;

    const auto x = h3(1, 0, 0), y = h3(0, 1, 0), z = h3(0, 0, 1);
    IntersectionInstance inst;
    inst.n = 3;
    inst.systems.emplace_back(3, std::vector< std::string >{"x", "y", "x'", "y'"},
                              std::vector< UnipotentMatrix >{x, y, inverse(x), inverse(y)});
    inst.systems.emplace_back(3, std::vector< std::string >{"z"}, std::vector< UnipotentMatrix >{z});

    const Decision d = decide_intersection(inst);
    std::cout << "verdict: " << to_string(d.verdict) << "\n";
    for (std::size_t m = 0; m < d.witnesses.size(); ++m)
    {
        std::cout << "word " << m + 1 << ":";
        for (const auto& run : d.witnesses[m].runs())
            std::cout << " " << inst.systems[m].names()[run.letter] << "^" << run.count;
        std::cout << "\n";
    }
    if (d.common_element)
        std::cout << "common element:\n" << d.common_element->matrix() << "\n";

    // orbit version: does z <x, y> meet <x, y>?
    const GeneratorSystem xy(3, {"x", "y"}, {x, y});
    const Decision o = decide_orbit(OrbitInstance{H3Elem{}, H3Elem{0, 0, 1}, xy, xy});
    std::cout << "orbit verdict: " << to_string(o.verdict) << " via " << o.route << "\n";
    return 0;
}
