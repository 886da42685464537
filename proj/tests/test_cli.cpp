#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace nilsemi;

namespace
{
const char* h3_two_sets = R"(nilsemi 1
# x against y
group ut-q 3
matrix x
1 1 0
0 1 0
0 0 1
end
lie y
0 0 0
0 0 1
0 0 0
end
problem intersection
set A = x
set B = y
option depth 6
)";

const char* sqrt2_instance = R"(nilsemi 1
group heisenberg-k 3 minpoly 1 0 -2
heis p a [0,1] b 0 c 0
heis q a 0 b [0,1] c 0
heis r a 0 b 0 c [2]
problem intersection
set A = p q
set B = r
)";

const char* orbit_instance = R"(nilsemi 1
group ut-q 3
matrix x
1 1 0
0 1 0
0 0 1
end
matrix y
1 0 0
0 1 1
0 0 1
end
matrix s
1 0 1
0 1 0
0 0 1
end
problem orbit
T = I
S = s
G = x y
H = x y
)";

struct ParseFailure
{
    std::size_t line, column;
};

ParseFailure failure(const std::string& text)
{
    try
    {
        parse_instance_text(text);
    }
    catch (const ParseError& e)
    {
        return {e.line(), e.column()};
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return {0, 0};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text)
{
    const auto p = std::filesystem::temp_directory_path() / ("nilsemi_test_" + name);
    std::ofstream(p) << text;
    return p;
}

int run_decide(const std::string& args, std::string* out = nullptr)
{
    const std::string cmd = std::string(NILSEMI_DECIDE_BINARY) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string text;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        text.append(buf, n);
    const int status = pclose(pipe);
    if (out)
        *out = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
} // namespace

TEST(ParseInstance, H3TwoSets)
{
    const auto f = parse_instance_text(h3_two_sets);
    const auto inst = f.to_intersection();
    EXPECT_EQ(inst.n, 3u);
    ASSERT_EQ(inst.systems.size(), 2u);
    EXPECT_EQ(inst.systems[1].generator(0), h3(0, 1, 0));
    EXPECT_EQ(f.option("depth"), "6");
}

TEST(ParseInstance, NumberFieldEmbedding)
{
    const auto inst = parse_instance_text(sqrt2_instance).to_intersection();
    EXPECT_EQ(inst.n, 6u);
    EXPECT_TRUE(is_two_step(inst.combined()));
}

TEST(ParseInstance, ProductOfHeisenbergFactors)
{
    const auto f = parse_instance_text(R"(nilsemi 1
group product
factor heisenberg-k 3 minpoly 1 0
factor heisenberg-k 3 minpoly 1 0 -2
heis u a 1 b 0 c 0 | a [0,1] b 0 c 0
problem intersection
set A = u
set B = u
)");
    const auto u = f.element("u");
    EXPECT_EQ(u.dim(), 3u + 6u);
    EXPECT_EQ(u(0, 1), 1);
    // iota(sqrt 2) = [[0, 2], [1, 0]] occupies rows 3-4, columns 5-6
    EXPECT_EQ(u(3, 5), 0);
    EXPECT_EQ(u(3, 6), 2);
    EXPECT_EQ(u(4, 5), 1);
    EXPECT_EQ(u(0, 3), 0);
}

TEST(ParseInstance, OrbitOutsideH3IsRejected)
{
    const auto f = parse_instance_text(R"(nilsemi 1
group ut-q 4
matrix g
1 1 0 0
0 1 0 0
0 0 1 0
0 0 0 1
end
problem orbit
T = I
S = g
G = g
H = g
)");
    EXPECT_THROW(f.to_orbit(), ParseError);
}

TEST(ParseInstance, ErrorsCarryPositions)
{
    auto f1 = failure("nilsemi 2\n");
    EXPECT_EQ(f1.line, 1u);
    EXPECT_EQ(f1.column, 9u);

    auto f2 = failure("nilsemi 1\ngroup ut-q 2\nmatrix a\n1 0.5\n0 1\nend\n");
    EXPECT_EQ(f2.line, 4u);
    EXPECT_EQ(f2.column, 3u);

    auto f3 = failure("nilsemi 1\ngroup ut-q 2\nmatrix a\n1 1\n0 1\nend\nproblem intersection\n  bogus line\n");
    EXPECT_EQ(f3.line, 8u);
    EXPECT_EQ(f3.column, 3u);

    auto f4 = failure("nilsemi 1\ngroup heisenberg-k 3 minpoly 1 0 -4\n");
    EXPECT_EQ(f4.line, 2u);

    // referenced name that was never defined
    auto f5 = failure("nilsemi 1\ngroup ut-q 2\nproblem intersection\nset A = a\n");
    EXPECT_EQ(f5.line, 0u);

    const auto lower = parse_instance_text("nilsemi 1\ngroup ut-q 2\nmatrix a\n1 0\n1 1\nend\nproblem intersection\n"
                                           "set A = a\nset B = a\n");
    EXPECT_THROW(lower.to_intersection(), ParseError);
}

TEST(ParseInstance, NotTwoStepIsRejected)
{
    const auto f = parse_instance_text(R"(nilsemi 1
group ut-q 4
lie a
0 1 0 0
0 0 0 0
0 0 0 0
0 0 0 0
end
lie b
0 0 0 0
0 0 1 0
0 0 0 0
0 0 0 0
end
lie c
0 0 0 0
0 0 0 0
0 0 0 1
0 0 0 0
end
problem intersection
set A = a b
set B = c
)");
    EXPECT_THROW(f.to_intersection(), PreconditionError);
}

TEST(Serialize, RoundTrip)
{
    for (const char* text : {h3_two_sets, sqrt2_instance, orbit_instance})
    {
        const auto f = parse_instance_text(text);
        EXPECT_EQ(parse_instance_text(serialize(f)), f);
    }
    std::mt19937_64 rng(71);
    for (int t = 0; t < 30; ++t)
    {
        InstanceFile f;
        f.group.kind = GroupSpec::Kind::UtQ;
        f.group.n = 4;
        for (int k = 0; k < 3; ++k)
        {
            NamedElement e;
            e.name = "g" + std::to_string(k);
            e.form = k % 2 ? NamedElement::Form::Lie : NamedElement::Form::Matrix;
            e.matrix = k % 2 ? testkit::random_nilpotent(rng, 4, 99, 50).matrix()
                             : testkit::random_unipotent(rng, 4, 99, 50).matrix();
            f.elements.push_back(e);
        }
        f.problem = InstanceFile::Problem::Intersection;
        f.sets = {{"A", {"g0", "g1"}}, {"B", {"g2"}}};
        f.options["budget"] = std::to_string(t);
        EXPECT_EQ(parse_instance_text(serialize(f)), f);
    }
}

TEST(Report, WitnessesReverifyOnReload)
{
    const auto f = parse_instance_text(orbit_instance);
    const auto d = decide_orbit(f.to_orbit());
    ResultReport r;
    r.command = "orbit";
    r.problem = "orbit";
    r.status = "decided";
    r.verdict = d.verdict;
    r.witnesses = {{"v", f.G, d.witnesses.at(0)}, {"w", f.H, d.witnesses.at(1)}};
    r.common_element = d.common_element->matrix();
    const auto reloaded = report_from_json(nlohmann::ordered_json::parse(to_json(r).dump()));
    EXPECT_TRUE(verify_report(f, reloaded));

    // tampering with one exponent breaks verification
    auto j = to_json(r);
    j["witnesses"][0]["runs"][0]["exp"] = "12345";
    EXPECT_FALSE(verify_report(f, report_from_json(j)));

    j = to_json(r);
    j["schema"] = "nilsemi.report/0";
    EXPECT_THROW(report_from_json(j), PreconditionError);
}

TEST(Oracle, Examples)
{
    const auto x = h3(1, 0, 0), y = h3(0, 1, 0), z = h3(0, 0, 1);
    IntersectionInstance xy{3, {testkit::system_of({x}), testkit::system_of({y})}};
    EXPECT_FALSE(bfs_intersection(xy, 6).found);

    IntersectionInstance comm{3, {testkit::system_of({x, y, inverse(x), inverse(y)}), testkit::system_of({z})}};
    const auto hit = bfs_intersection(comm, 4);
    ASSERT_TRUE(hit.found);
    EXPECT_EQ(*hit.common, z);
    EXPECT_EQ(hit.witnesses[0].letters(), (std::vector< std::size_t >{0, 1, 2, 3}));

    IntersectionInstance same{3, {testkit::system_of({x}), testkit::system_of({x})}};
    const auto s = bfs_intersection(same, 1);
    ASSERT_TRUE(s.found);
    EXPECT_EQ(*s.common, x);

    EXPECT_THROW(bfs_intersection(comm, 8, 50), BudgetExceeded);
}

TEST(DecideTool, Commands)
{
    const auto two = temp_file("two.nsi", h3_two_sets);
    const auto orbit = temp_file("orbit.nsi", orbit_instance);
    const auto same = temp_file("same.nsi", std::string(h3_two_sets).replace(std::string(h3_two_sets).find("set B = y"), 9,
                                                                              "set B = x"));
    std::string out;
    EXPECT_EQ(run_decide("intersect " + two.string()), 0);
    EXPECT_EQ(run_decide("intersect " + same.string() + " --witness", &out), 1);
    EXPECT_NE(out.find("witness A: x"), std::string::npos) << out;
    EXPECT_EQ(run_decide("orbit " + orbit.string(), &out), 1);
    EXPECT_NE(out.find("verification: product"), std::string::npos) << out;
    EXPECT_EQ(run_decide("oracle " + two.string()), 0); // depth from the instance option
    EXPECT_EQ(run_decide("oracle " + same.string() + " --depth 1"), 1);

    const auto logfile = temp_file("log.nsi", "nilsemi 1\ngroup ut-q 3\nmatrix m\n1 1 1\n0 1 1\n0 0 1\nend\n");
    EXPECT_EQ(run_decide("log " + logfile.string() + " --matrix m", &out), 0);
    EXPECT_NE(out.find("0 1 1/2"), std::string::npos) << out;

    // wrong problem kind, missing file, malformed input
    EXPECT_EQ(run_decide("orbit " + two.string()), 3);
    EXPECT_EQ(run_decide("intersect /nonexistent/file.nsi"), 3);
    const auto bad = temp_file("bad.nsi", "nilsemi 1\ngroup ut-q 3\nmatrix m\n1 1.5 0\n");
    EXPECT_EQ(run_decide("intersect " + bad.string(), &out), 3);
    EXPECT_NE(out.find("line 4"), std::string::npos) << out;

    // budget exhaustion maps to exit code 2
    const auto big = temp_file("big.nsi", std::string(orbit_instance) + "option hard-cap 1\n");
    EXPECT_EQ(run_decide("orbit " + big.string()), 2);

    // JSON report round trip through the verify command
    EXPECT_EQ(run_decide("orbit " + orbit.string() + " --json", &out), 1);
    const auto report = temp_file("report.json", out);
    EXPECT_EQ(run_decide("verify " + orbit.string() + " " + report.string(), &out), 0);
    EXPECT_NE(out.find("witnesses verified"), std::string::npos) << out;
}
