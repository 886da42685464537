#ifndef NILSEMI_REPORT_HPP
#define NILSEMI_REPORT_HPP

#include "nilsemi/decision.hpp"
#include "nilsemi/instance.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/oracle.hpp"
#include "nilsemi/word.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nilsemi
{

inline constexpr const char* report_schema = "nilsemi.report/1";

/// A witness word tagged with the generator set it ranges over.
struct NamedWord
{
    std::string set;                  // intersection: the set name; orbit: "v" (over G) or "w" (over H)
    std::vector< std::string > alphabet;
    WitnessWord word;
};

struct OracleCheck
{
    std::size_t depth = 0;
    bool found = false;
    std::vector< NamedWord > witnesses;
    std::optional< bool > agrees; // absent when the decider gave no verdict
};

struct ResultReport
{
    std::string command;
    std::string problem; // "intersection" or "orbit"
    std::string status;  // "decided", "unsupported", "budget_exceeded", "input_error", "ok"
    std::optional< Verdict > verdict;
    std::string route;
    std::vector< NamedWord > witnesses;
    std::optional< Matrix > common_element;
    std::string verification;
    std::optional< BigInt > scale;
    std::vector< std::string > trace;
    std::vector< IterationRecord > iterations;
    double timing_ms = 0;
    std::optional< OracleCheck > oracle;
    std::string message;
    std::optional< std::string > cap;
    std::optional< Matrix > result_matrix; // log / exp
};

namespace detail
{
using json = nlohmann::ordered_json;

inline json matrix_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            r.push_back(to_string(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j)
{
    const std::size_t n = j.size();
    Matrix m(n, n == 0 ? 0 : j.at(0).size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m.cols(); ++k)
            m(i, k) = parse_rational(j.at(i).at(k).get< std::string >());
    return m;
}

inline json word_json(const NamedWord& w)
{
    json runs = json::array();
    for (const auto& r : w.word.runs())
        runs.push_back({{"gen", w.alphabet.at(r.letter)}, {"exp", to_string(r.count)}});
    return {{"set", w.set}, {"alphabet", w.alphabet}, {"runs", std::move(runs)}};
}

inline NamedWord word_from_json(const json& j)
{
    NamedWord w;
    w.set = j.at("set").get< std::string >();
    w.alphabet = j.at("alphabet").get< std::vector< std::string > >();
    w.word = WitnessWord(w.alphabet.size());
    for (const auto& r : j.at("runs"))
    {
        const auto name = r.at("gen").get< std::string >();
        std::size_t letter = w.alphabet.size();
        for (std::size_t k = 0; k < w.alphabet.size(); ++k)
            if (w.alphabet[k] == name)
                letter = k;
        if (letter == w.alphabet.size())
            throw PreconditionError("witness uses generator '" + name + "' outside its alphabet");
        w.word.append(letter, BigInt(r.at("exp").get< std::string >()));
    }
    return w;
}

inline json sets_json(const std::vector< std::vector< std::size_t > >& s)
{
    json out = json::array();
    for (const auto& v : s)
        out.push_back(v);
    return out;
}
} // namespace detail

inline nlohmann::ordered_json to_json(const ResultReport& r)
{
    using detail::json;
    json j;
    j["schema"] = report_schema;
    j["command"] = r.command;
    if (!r.problem.empty())
        j["problem"] = r.problem;
    j["status"] = r.status;
    j["verdict"] = r.verdict ? json(to_string(*r.verdict)) : json(nullptr);
    if (!r.route.empty())
        j["route"] = r.route;
    json ws = json::array();
    for (const auto& w : r.witnesses)
        ws.push_back(detail::word_json(w));
    j["witnesses"] = std::move(ws);
    if (r.common_element)
        j["common_element"] = detail::matrix_json(*r.common_element);
    if (!r.verification.empty())
        j["verification"] = r.verification;
    if (r.scale)
        j["scale"] = to_string(*r.scale);
    j["trace"] = r.trace;
    json its = json::array();
    for (const auto& it : r.iterations)
        its.push_back({{"sets", detail::sets_json(it.sets)},
                       {"support", detail::sets_json(it.support)},
                       {"equations", it.equations},
                       {"projected_equations", it.projected_equations},
                       {"lp_calls", it.lp_calls}});
    j["iterations"] = std::move(its);
    j["timing_ms"] = r.timing_ms;
    if (r.oracle)
    {
        json o{{"depth", r.oracle->depth}, {"found", r.oracle->found}};
        json ow = json::array();
        for (const auto& w : r.oracle->witnesses)
            ow.push_back(detail::word_json(w));
        o["witnesses"] = std::move(ow);
        o["agrees"] = r.oracle->agrees ? json(*r.oracle->agrees) : json(nullptr);
        j["oracle"] = std::move(o);
    }
    if (r.result_matrix)
        j["matrix"] = detail::matrix_json(*r.result_matrix);
    if (!r.message.empty())
        j["message"] = r.message;
    if (r.cap)
        j["cap"] = *r.cap;
    return j;
}

/// Reads the fields needed for re-verification; rejects other schema versions.
inline ResultReport report_from_json(const nlohmann::ordered_json& j)
{
    if (j.value("schema", std::string()) != report_schema)
        throw PreconditionError("unsupported report schema (expected " + std::string(report_schema) + ")");
    ResultReport r;
    r.command = j.at("command").get< std::string >();
    r.problem = j.value("problem", std::string());
    r.status = j.at("status").get< std::string >();
    if (!j.at("verdict").is_null())
    {
        const auto v = j.at("verdict").get< std::string >();
        r.verdict = v == "Empty" ? Verdict::Empty : Verdict::NonEmpty;
    }
    r.route = j.value("route", std::string());
    for (const auto& w : j.at("witnesses"))
        r.witnesses.push_back(detail::word_from_json(w));
    if (j.contains("common_element"))
        r.common_element = detail::matrix_from_json(j.at("common_element"));
    r.verification = j.value("verification", std::string());
    if (j.contains("scale"))
        r.scale = BigInt(j.at("scale").get< std::string >());
    r.trace = j.value("trace", std::vector< std::string >{});
    r.timing_ms = j.value("timing_ms", 0.0);
    r.message = j.value("message", std::string());
    return r;
}

/// Recomputes every witness product from the instance with exact matrix arithmetic.
/// True when the report carries witnesses that evaluate to one common element
/// (T v = S w for orbits) and that element matches the recorded one, if any.
inline bool verify_report(const InstanceFile& file, const ResultReport& r)
{
    if (r.witnesses.empty())
        return false;
    std::optional< UnipotentMatrix > common;
    for (std::size_t k = 0; k < r.witnesses.size(); ++k)
    {
        const auto& w = r.witnesses[k];
        UnipotentMatrix left = UnipotentMatrix::identity(file.group.dim());
        if (file.problem == InstanceFile::Problem::Orbit)
        {
            if (r.witnesses.size() != 2 || w.word.empty())
                return false;
            left = file.element(k == 0 ? file.T : file.S);
        }
        else if (file.problem == InstanceFile::Problem::Intersection)
        {
            if (r.witnesses.size() != file.sets.size() || file.sets[k].second != w.alphabet)
                return false;
        }
        else
            return false;
        if (file.problem == InstanceFile::Problem::Orbit && w.alphabet != (k == 0 ? file.G : file.H))
            return false;
        const UnipotentMatrix value = left * product_of_word(file.system(w.alphabet), w.word);
        if (!common)
            common = value;
        else if (!(value == *common))
            return false;
    }
    return !r.common_element || *r.common_element == common->matrix();
}

} // namespace nilsemi

#endif // NILSEMI_REPORT_HPP
