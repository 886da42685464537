#include <nilsemi.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace
{
using namespace nilsemi;

enum ExitCode
{
    ExitEmpty = 0,
    ExitNonEmpty = 1,
    ExitUndecided = 2,
    ExitInputError = 3
};

struct Flags
{
    std::string file;
    std::string matrix;
    std::string report;
    std::size_t depth = 0;
    std::size_t budget = 0;
    std::size_t cross_check = 0;
    bool witness = false;
    bool trace = false;
    bool json = false;
};

std::vector< NamedWord > intersection_words(const InstanceFile& f, const std::vector< WitnessWord >& words)
{
    std::vector< NamedWord > out;
    for (std::size_t m = 0; m < words.size(); ++m)
        out.push_back({f.sets[m].first, f.sets[m].second, words[m]});
    return out;
}

std::vector< NamedWord > orbit_words(const InstanceFile& f, const std::vector< WitnessWord >& words)
{
    return {{"v", f.G, words.at(0)}, {"w", f.H, words.at(1)}};
}

std::string word_text(const NamedWord& w)
{
    if (w.word.empty())
        return "(empty)";
    std::string s;
    for (const auto& r : w.word.runs())
    {
        if (!s.empty())
            s += " ";
        s += w.alphabet[r.letter];
        if (r.count != 1)
            s += "^" + to_string(r.count);
    }
    return s;
}

void print_matrix(std::ostream& os, const Matrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        os << "  ";
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << to_string(m(i, j));
        os << "\n";
    }
}

void print_text(const ResultReport& r, bool trace)
{
    if (r.result_matrix)
    {
        print_matrix(std::cout, *r.result_matrix);
        return;
    }
    if (r.status == "decided")
        std::cout << "verdict: " << to_string(*r.verdict) << "\n";
    else if (r.status == "ok" && r.oracle)
        std::cout << "oracle (depth " << r.oracle->depth << "): " << (r.oracle->found ? "collision" : "none") << "\n";
    else
        std::cout << "status: " << r.status << "\n";
    if (!r.message.empty())
        std::cout << "message: " << r.message << "\n";
    if (r.cap)
        std::cout << "cap: " << *r.cap << "\n";
    if (!r.route.empty())
        std::cout << "route: " << r.route << "\n";
    for (const auto& w : r.witnesses)
        std::cout << "witness " << w.set << ": " << word_text(w) << "\n";
    if (r.oracle && r.command != "oracle")
    {
        std::cout << "oracle (depth " << r.oracle->depth << "): " << (r.oracle->found ? "collision" : "none");
        if (r.oracle->agrees)
            std::cout << (*r.oracle->agrees ? ", consistent" : ", DISAGREES");
        std::cout << "\n";
    }
    if (r.oracle && r.command == "oracle")
        for (const auto& w : r.oracle->witnesses)
            std::cout << "witness " << w.set << ": " << word_text(w) << "\n";
    if (r.scale)
        std::cout << "scale: " << to_string(*r.scale) << "\n";
    if (!r.verification.empty())
        std::cout << "verification: " << r.verification << "\n";
    if (r.common_element)
    {
        std::cout << "common element:\n";
        print_matrix(std::cout, *r.common_element);
    }
    if (trace)
    {
        for (std::size_t k = 0; k < r.iterations.size(); ++k)
        {
            const auto& it = r.iterations[k];
            std::cout << "pass " << k + 1 << ":";
            for (const auto& s : it.sets)
            {
                std::cout << " {";
                for (std::size_t i = 0; i < s.size(); ++i)
                    std::cout << (i ? "," : "") << s[i];
                std::cout << "}";
            }
            std::cout << " equations=" << it.equations << " lp_calls=" << it.lp_calls << "\n";
        }
        for (const auto& line : r.trace)
            std::cout << "trace: " << line << "\n";
    }
}

OracleCheck oracle_check(const InstanceFile& f, std::size_t depth)
{
    OracleCheck oc;
    oc.depth = depth;
    if (f.problem == InstanceFile::Problem::Intersection)
    {
        const auto res = bfs_intersection(f.to_intersection(), depth);
        oc.found = res.found;
        if (res.found)
            oc.witnesses = intersection_words(f, res.witnesses);
    }
    else
    {
        const auto res = bfs_orbit(f.to_orbit(), depth);
        oc.found = res.found;
        if (res.found)
            oc.witnesses = orbit_words(f, res.witnesses);
    }
    return oc;
}

void fill_decision(ResultReport& r, const InstanceFile& f, const Decision& d)
{
    r.status = "decided";
    r.verdict = d.verdict;
    r.route = d.route;
    r.witnesses = r.problem == "orbit" ? (d.witnesses.empty() ? std::vector< NamedWord >{} : orbit_words(f, d.witnesses))
                                       : intersection_words(f, d.witnesses);
    if (d.common_element)
        r.common_element = d.common_element->matrix();
    r.verification = d.verification;
    r.scale = d.scale;
    r.trace = d.trace;
    r.iterations = d.iterations;
}

std::size_t option_or(const InstanceFile& f, const std::string& key, std::size_t fallback)
{
    if (const auto v = f.option(key))
        return static_cast< std::size_t >(std::stoull(*v));
    return fallback;
}

ResultReport run(const std::string& command, const Flags& flags, int& code)
{
    ResultReport r;
    r.command = command;
    const InstanceFile f = parse_instance_file(flags.file);
    r.problem = f.problem == InstanceFile::Problem::Orbit          ? "orbit"
                : f.problem == InstanceFile::Problem::Intersection ? "intersection"
                                                                   : "";
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
        r.timing_ms = std::chrono::duration< double, std::milli >(std::chrono::steady_clock::now() - start).count();
    };

    if (command == "log" || command == "exp")
    {
        if (flags.matrix.empty())
            throw ParseError("--matrix NAME is required", 0, 0);
        const NamedElement* e = f.find(flags.matrix);
        if (!e)
            throw ParseError("undefined element '" + flags.matrix + "'", 0, 0);
        if (command == "log")
            r.result_matrix = log_unipotent(f.element(flags.matrix)).matrix();
        else
        {
            // exp reads the stored rows as a Lie algebra element
            if (e->form == NamedElement::Form::Heis)
                throw ParseError("exp needs a 'matrix' or 'lie' element", 0, 0);
            if (!check_strictly_upper(e->matrix))
                throw ParseError("element '" + flags.matrix + "' is not strictly upper triangular", 0, 0);
            r.result_matrix = exp_nilpotent(NilpotentMatrix(e->matrix)).matrix();
        }
        r.status = "ok";
        finish();
        code = 0;
        return r;
    }

    if (f.problem == InstanceFile::Problem::None)
        throw ParseError("instance has no problem block", 0, 0);
    if (command == "intersect" && f.problem != InstanceFile::Problem::Intersection)
        throw ParseError("'intersect' needs a 'problem intersection' instance", 0, 0);
    if (command == "orbit" && f.problem != InstanceFile::Problem::Orbit)
        throw ParseError("'orbit' needs a 'problem orbit' instance", 0, 0);

    const std::size_t depth = flags.depth ? flags.depth : option_or(f, "depth", 0);
    if (command == "oracle")
    {
        if (depth == 0)
            throw ParseError("oracle needs --depth D (or 'option depth') with D >= 1", 0, 0);
        r.oracle = oracle_check(f, depth);
        r.status = "ok";
        finish();
        code = r.oracle->found ? ExitNonEmpty : ExitEmpty;
        return r;
    }

    const bool want_witness = flags.witness || command == "witness";
    Decision d;
    if (f.problem == InstanceFile::Problem::Intersection)
    {
        IntersectOptions opt;
        opt.extract_witness = want_witness;
        d = decide_intersection(f.to_intersection(), opt);
    }
    else
    {
        OrbitOptions opt;
        opt.skeleton_budget = flags.budget ? flags.budget : option_or(f, "budget", opt.skeleton_budget);
        opt.hard_cap = option_or(f, "hard-cap", opt.hard_cap);
        if (flags.budget)
            opt.ilp.node_budget = flags.budget;
        d = decide_orbit(f.to_orbit(), opt);
    }
    fill_decision(r, f, d);
    finish();
    if (flags.cross_check)
    {
        r.oracle = oracle_check(f, flags.cross_check);
        // a bounded search can only refute an Empty verdict
        r.oracle->agrees = !(r.oracle->found && d.verdict == Verdict::Empty);
    }
    code = d.verdict == Verdict::Empty ? ExitEmpty : ExitNonEmpty;
    return r;
}

int verify(const Flags& flags, bool json_out)
{
    const InstanceFile f = parse_instance_file(flags.file);
    std::ifstream in(flags.report);
    if (!in)
        throw ParseError("cannot open '" + flags.report + "'", 0, 0);
    const ResultReport r = report_from_json(nlohmann::ordered_json::parse(in));
    const bool ok = verify_report(f, r);
    if (json_out)
        std::cout << nlohmann::ordered_json{{"schema", report_schema}, {"command", "verify"}, {"verified", ok}}.dump(2)
                  << "\n";
    else
        std::cout << (ok ? "witnesses verified" : "witnesses do NOT verify") << "\n";
    return ok ? 0 : 1;
}
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decide intersection and orbit problems for finitely generated nilpotent matrix semigroups"};
    app.require_subcommand(1);
    Flags flags;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", flags.file, "instance file")->required();
        sub->add_flag("--json", flags.json, "print a machine-readable report");
        sub->add_flag("--trace", flags.trace, "include the refinement passes / branch log");
    };
    auto deciding = [&](CLI::App* sub) {
        common(sub);
        sub->add_flag("--witness", flags.witness, "construct and verify a witness for NonEmpty verdicts");
        sub->add_option("--budget", flags.budget, "enumeration budget for the orbit search");
        sub->add_option("--cross-check", flags.cross_check, "also run the BFS oracle to this depth");
    };
    std::vector< std::pair< std::string, CLI::App* > > subs;
    subs.emplace_back("intersect", app.add_subcommand("intersect", "intersection emptiness"));
    deciding(subs.back().second);
    subs.emplace_back("orbit", app.add_subcommand("orbit", "orbit intersection in H3(Q)"));
    deciding(subs.back().second);
    subs.emplace_back("witness", app.add_subcommand("witness", "decide either problem and always build a witness"));
    deciding(subs.back().second);
    subs.emplace_back("oracle", app.add_subcommand("oracle", "bounded breadth-first search only"));
    common(subs.back().second);
    subs.back().second->add_option("--depth", flags.depth, "maximal word length");
    for (const char* name : {"log", "exp"})
    {
        subs.emplace_back(name, app.add_subcommand(name, std::string(name) + " of one named element"));
        common(subs.back().second);
        subs.back().second->add_option("--matrix", flags.matrix, "element name")->required();
    }
    auto* ver = app.add_subcommand("verify", "re-check the witnesses of a saved JSON report");
    ver->add_option("file", flags.file, "instance file")->required();
    ver->add_option("report", flags.report, "report produced with --json")->required();
    ver->add_flag("--json", flags.json, "print a machine-readable result");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ExitInputError;
    }

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed())
            command = name;

    ResultReport r;
    r.command = ver->parsed() ? "verify" : command;
    int code = ExitInputError;
    try
    {
        if (ver->parsed())
            return verify(flags, flags.json);
        r = run(command, flags, code);
    }
    catch (const ParseError& e)
    {
        r.status = "input_error";
        r.message = e.what();
        code = ExitInputError;
    }
    catch (const PreconditionError& e)
    {
        r.status = "input_error";
        r.message = e.what();
        code = ExitInputError;
    }
    catch (const nlohmann::json::exception& e)
    {
        r.status = "input_error";
        r.message = e.what();
        code = ExitInputError;
    }
    catch (const BudgetExceeded& e)
    {
        r.status = "budget_exceeded";
        r.message = e.what();
        r.cap = e.cap();
        code = ExitUndecided;
    }
    catch (const Unsupported& e)
    {
        r.status = "unsupported";
        r.message = e.what();
        code = ExitUndecided;
    }

    if (flags.json)
        std::cout << to_json(r).dump(2) << "\n";
    else if (code == ExitInputError)
        std::cerr << "error: " << r.message << "\n";
    else
        print_text(r, flags.trace);
    return code;
}
