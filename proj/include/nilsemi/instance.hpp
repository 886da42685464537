#ifndef NILSEMI_INSTANCE_HPP
#define NILSEMI_INSTANCE_HPP

#include "nilsemi/intersect.hpp"
#include "nilsemi/matlie.hpp"
#include "nilsemi/matrix.hpp"
#include "nilsemi/numfield.hpp"
#include "nilsemi/orbit.hpp"
#include "nilsemi/rational.hpp"

#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilsemi
{

/// Syntax or validation problem in an instance file, with a 1-based position (0 when not tied to a line).
class ParseError : public std::runtime_error
{
  public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                                  : msg),
          line_(line), column_(column)
    {
    }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_, column_;
};

/// One Heisenberg factor H_n(K), K = Q[t]/(minpoly).
struct HeisenbergFactor
{
    std::size_t n = 3;
    std::vector< Rational > minpoly; // highest degree first, monic

    std::size_t degree() const { return minpoly.size() - 1; }
    std::size_t embedded_dim() const { return n * degree(); }
    friend bool operator==(const HeisenbergFactor&, const HeisenbergFactor&) = default;
};

struct GroupSpec
{
    enum class Kind
    {
        UtQ,
        HeisenbergK,
        Product
    };
    Kind kind = Kind::UtQ;
    std::size_t n = 0;                       // ut-q dimension
    std::vector< HeisenbergFactor > factors; // one for heisenberg-k, several for product

    std::size_t dim() const
    {
        if (kind == Kind::UtQ)
            return n;
        std::size_t d = 0;
        for (const auto& f : factors)
            d += f.embedded_dim();
        return d;
    }
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Coordinates of one Heisenberg element in a single factor; every field entry is its power-basis vector.
struct HeisComponent
{
    std::vector< std::vector< Rational > > a, b;
    std::vector< Rational > c;
    friend bool operator==(const HeisComponent&, const HeisComponent&) = default;
};

struct NamedElement
{
    enum class Form
    {
        Matrix, // unipotent matrix rows
        Lie,    // strictly upper triangular rows, exponentiated
        Heis    // Heisenberg coordinates, one component per factor
    };
    std::string name;
    Form form = Form::Matrix;
    Matrix matrix;
    std::vector< HeisComponent > components;
    friend bool operator==(const NamedElement&, const NamedElement&) = default;
};

struct InstanceFile
{
    enum class Problem
    {
        None,
        Intersection,
        Orbit
    };
    int version = 1;
    GroupSpec group;
    std::vector< NamedElement > elements;
    Problem problem = Problem::None;
    std::vector< std::pair< std::string, std::vector< std::string > > > sets; // intersection
    std::string T, S;                                                       // orbit
    std::vector< std::string > G, H;                                        // orbit
    std::map< std::string, std::string > options;

    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;

    const NamedElement* find(const std::string& name) const
    {
        for (const auto& e : elements)
            if (e.name == name)
                return &e;
        return nullptr;
    }

    /// The element as a matrix of UT(dim, Q); "I" is the identity unless defined.
    UnipotentMatrix element(const std::string& name) const
    {
        const NamedElement* e = find(name);
        if (!e)
        {
            if (name == "I")
                return UnipotentMatrix::identity(group.dim());
            throw ParseError("undefined element '" + name + "'", 0, 0);
        }
        switch (e->form)
        {
        case NamedElement::Form::Matrix:
            if (!check_unipotent(e->matrix))
                throw ParseError("element '" + name + "' is not unipotent upper triangular", 0, 0);
            return UnipotentMatrix(e->matrix);
        case NamedElement::Form::Lie:
            if (!check_strictly_upper(e->matrix))
                throw ParseError("Lie element '" + name + "' is not strictly upper triangular", 0, 0);
            return exp_nilpotent(NilpotentMatrix(e->matrix));
        case NamedElement::Form::Heis:
            break;
        }
        std::vector< Matrix > blocks;
        for (std::size_t f = 0; f < group.factors.size(); ++f)
        {
            const auto& fac = group.factors[f];
            const auto& comp = e->components.at(f);
            std::vector< Rational > low(fac.minpoly.rbegin(), fac.minpoly.rend());
            const auto field = std::make_shared< const NumberField >(std::move(low));
            auto fe = [&](const std::vector< Rational >& v) { return FieldElem(field, v); };
            std::vector< FieldElem > a, b;
            for (const auto& v : comp.a)
                a.push_back(fe(v));
            for (const auto& v : comp.b)
                b.push_back(fe(v));
            blocks.push_back(embed_heisenberg(HeisenbergElemK(fac.n, std::move(a), std::move(b), fe(comp.c))).matrix());
        }
        return UnipotentMatrix(block_diagonal(blocks));
    }

    GeneratorSystem system(const std::vector< std::string >& names) const
    {
        std::vector< UnipotentMatrix > gens;
        for (const auto& n : names)
            gens.push_back(element(n));
        return GeneratorSystem(group.dim(), names, std::move(gens));
    }

    IntersectionInstance to_intersection() const
    {
        if (problem != Problem::Intersection)
            throw ParseError("instance does not state an intersection problem", 0, 0);
        IntersectionInstance inst;
        inst.n = group.dim();
        for (const auto& [name, members] : sets)
            inst.systems.push_back(system(members));
        inst.validate();
        return inst;
    }

    OrbitInstance to_orbit() const
    {
        if (problem != Problem::Orbit)
            throw ParseError("instance does not state an orbit problem", 0, 0);
        if (group.dim() != 3)
            throw ParseError("orbit problems are decided in H3(Q) only; this group embeds in dimension " +
                                 std::to_string(group.dim()),
                             0, 0);
        return OrbitInstance{H3Elem::from_matrix(element(T)), H3Elem::from_matrix(element(S)), system(G), system(H)};
    }

    std::optional< std::string > option(const std::string& key) const
    {
        const auto it = options.find(key);
        if (it == options.end())
            return std::nullopt;
        return it->second;
    }
};

namespace detail
{
struct Token
{
    std::string text;
    std::size_t column;
};

inline std::vector< Token > tokenize(const std::string& line)
{
    std::vector< Token > out;
    std::size_t i = 0;
    while (i < line.size())
    {
        if (line[i] == '#')
            break;
        if (std::isspace(static_cast< unsigned char >(line[i])))
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast< unsigned char >(line[j])) && line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

class Parser
{
  public:
    explicit Parser(std::istream& in)
    {
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line))
        {
            ++no;
            auto toks = tokenize(line);
            if (!toks.empty())
                lines_.push_back({no, std::move(toks)});
        }
    }

    InstanceFile parse()
    {
        InstanceFile f;
        if (lines_.empty())
            throw ParseError("empty instance file", 0, 0);
        {
            const auto& l = next();
            if (l.toks.size() != 2 || l.toks[0].text != "nilsemi")
                fail(l, 0, "expected header 'nilsemi 1'");
            if (l.toks[1].text != "1")
                fail(l, 1, "unsupported format version '" + l.toks[1].text + "'");
        }
        bool have_group = false;
        while (pos_ < lines_.size())
        {
            const auto& l = next();
            const std::string& kw = l.toks[0].text;
            if (kw == "group")
            {
                if (have_group)
                    fail(l, 0, "group declared twice");
                parse_group(l, f.group);
                have_group = true;
            }
            else if (kw == "matrix" || kw == "lie")
            {
                require_group(l, have_group);
                if (f.group.kind != GroupSpec::Kind::UtQ)
                    fail(l, 0, "'" + kw + "' elements need 'group ut-q'");
                NamedElement e;
                e.form = kw == "matrix" ? NamedElement::Form::Matrix : NamedElement::Form::Lie;
                e.name = name_at(l, 1);
                expect_count(l, 2);
                e.matrix = parse_rows(f.group.n);
                add_element(f, std::move(e), l);
            }
            else if (kw == "heis")
            {
                require_group(l, have_group);
                if (f.group.kind == GroupSpec::Kind::UtQ)
                    fail(l, 0, "'heis' elements need a Heisenberg or product group");
                NamedElement e;
                e.form = NamedElement::Form::Heis;
                e.name = name_at(l, 1);
                parse_heis(l, f.group, e);
                add_element(f, std::move(e), l);
            }
            else if (kw == "problem")
            {
                expect_count(l, 2);
                if (f.problem != InstanceFile::Problem::None)
                    fail(l, 0, "problem declared twice");
                if (l.toks[1].text == "intersection")
                    f.problem = InstanceFile::Problem::Intersection;
                else if (l.toks[1].text == "orbit")
                    f.problem = InstanceFile::Problem::Orbit;
                else
                    fail(l, 1, "unknown problem '" + l.toks[1].text + "'");
            }
            else if (kw == "set")
            {
                if (f.problem != InstanceFile::Problem::Intersection)
                    fail(l, 0, "'set' lines belong to 'problem intersection'");
                if (l.toks.size() < 3 || l.toks[2].text != "=")
                    fail(l, 0, "expected 'set NAME = ELEMENT...'");
                std::vector< std::string > members;
                for (std::size_t k = 3; k < l.toks.size(); ++k)
                    members.push_back(l.toks[k].text);
                f.sets.emplace_back(name_at(l, 1), std::move(members));
            }
            else if (kw == "T" || kw == "S" || kw == "G" || kw == "H")
            {
                if (f.problem != InstanceFile::Problem::Orbit)
                    fail(l, 0, "'" + kw + "' lines belong to 'problem orbit'");
                if (l.toks.size() < 2 || l.toks[1].text != "=")
                    fail(l, 0, "expected '" + kw + " = ...'");
                std::vector< std::string > members;
                for (std::size_t k = 2; k < l.toks.size(); ++k)
                    members.push_back(l.toks[k].text);
                if (kw == "T" || kw == "S")
                {
                    if (members.size() != 1)
                        fail(l, 0, kw + " names exactly one element");
                    (kw == "T" ? f.T : f.S) = members[0];
                }
                else
                    (kw == "G" ? f.G : f.H) = std::move(members);
            }
            else if (kw == "option")
            {
                expect_count(l, 3);
                const std::string& key = l.toks[1].text;
                if (key != "budget" && key != "depth" && key != "hard-cap")
                    fail(l, 1, "unknown option '" + key + "'");
                for (char ch : l.toks[2].text)
                    if (ch < '0' || ch > '9')
                        fail(l, 2, "option value must be a nonnegative integer");
                f.options[key] = l.toks[2].text;
            }
            else
                fail(l, 0, "unknown directive '" + kw + "'");
        }
        if (!have_group)
            throw ParseError("missing 'group' declaration", 0, 0);
        check_references(f);
        return f;
    }

  private:
    struct Line
    {
        std::size_t no;
        std::vector< Token > toks;
    };

    const Line& next() { return lines_[pos_++]; }

    [[noreturn]] static void fail(const Line& l, std::size_t tok, const std::string& msg)
    {
        throw ParseError(msg, l.no, tok < l.toks.size() ? l.toks[tok].column : 1);
    }

    static void expect_count(const Line& l, std::size_t n)
    {
        if (l.toks.size() != n)
            fail(l, std::min(n, l.toks.size() - 1),
                 "expected " + std::to_string(n) + " fields, found " + std::to_string(l.toks.size()));
    }

    static void require_group(const Line& l, bool have)
    {
        if (!have)
            fail(l, 0, "elements must follow the 'group' declaration");
    }

    static std::string name_at(const Line& l, std::size_t k)
    {
        if (k >= l.toks.size())
            fail(l, l.toks.size() - 1, "missing name");
        const std::string& s = l.toks[k].text;
        for (char ch : s)
            if (!(std::isalnum(static_cast< unsigned char >(ch)) || ch == '_' || ch == '\'' || ch == '-' || ch == '.'))
                fail(l, k, "invalid name '" + s + "'");
        if (s == "=" || s.empty())
            fail(l, k, "invalid name");
        return s;
    }

    static Rational rational_at(const Line& l, std::size_t k)
    {
        try
        {
            return parse_rational(l.toks.at(k).text);
        }
        catch (const std::invalid_argument& e)
        {
            fail(l, k, e.what());
        }
    }

    static std::size_t size_at(const Line& l, std::size_t k)
    {
        const Rational v = rational_at(l, k);
        if (!is_integer(v) || v < 1 || v > 1000)
            fail(l, k, "expected a positive integer dimension");
        return v.get_num().get_ui();
    }

    // "heisenberg-k N [minpoly c_d ... c_0]" starting at token k; returns the next token index
    static std::size_t parse_factor(const Line& l, std::size_t k, HeisenbergFactor& fac)
    {
        if (k >= l.toks.size() || l.toks[k].text != "heisenberg-k")
            fail(l, std::min(k, l.toks.size() - 1), "expected 'heisenberg-k'");
        if (k + 1 >= l.toks.size())
            fail(l, k, "missing Heisenberg dimension");
        fac.n = size_at(l, k + 1);
        if (fac.n < 3)
            fail(l, k + 1, "Heisenberg groups need n >= 3");
        k += 2;
        fac.minpoly = {Rational(1), Rational(0)};
        if (k < l.toks.size() && l.toks[k].text == "minpoly")
        {
            fac.minpoly.clear();
            for (++k; k < l.toks.size(); ++k)
                fac.minpoly.push_back(rational_at(l, k));
            if (fac.minpoly.size() < 2)
                fail(l, l.toks.size() - 1, "minimal polynomial must have degree at least 1");
            if (fac.minpoly.front() != 1)
                fail(l, l.toks.size() - fac.minpoly.size(), "minimal polynomial must be monic");
            if (fac.minpoly.size() >= 3)
            {
                std::vector< Rational > low(fac.minpoly.rbegin(), fac.minpoly.rend());
                if (const auto root = NumberField(low).rational_root())
                    fail(l, l.toks.size() - 1, "minimal polynomial has the rational root " + to_string(*root));
            }
        }
        return k;
    }

    void parse_group(const Line& l, GroupSpec& g)
    {
        if (l.toks.size() < 2)
            fail(l, 0, "missing group kind");
        const std::string& kind = l.toks[1].text;
        if (kind == "ut-q")
        {
            expect_count(l, 3);
            g.kind = GroupSpec::Kind::UtQ;
            g.n = size_at(l, 2);
        }
        else if (kind == "heisenberg-k")
        {
            g.kind = GroupSpec::Kind::HeisenbergK;
            HeisenbergFactor fac;
            if (parse_factor(l, 1, fac) != l.toks.size())
                fail(l, l.toks.size() - 1, "unexpected trailing fields");
            g.factors = {fac};
        }
        else if (kind == "product")
        {
            expect_count(l, 2);
            g.kind = GroupSpec::Kind::Product;
            while (pos_ < lines_.size() && lines_[pos_].toks[0].text == "factor")
            {
                const auto& fl = next();
                HeisenbergFactor fac;
                if (parse_factor(fl, 1, fac) != fl.toks.size())
                    fail(fl, fl.toks.size() - 1, "unexpected trailing fields");
                g.factors.push_back(fac);
            }
            if (g.factors.empty())
                fail(l, 1, "a product group needs at least one 'factor' line");
        }
        else
            fail(l, 1, "unknown group kind '" + kind + "'");
    }

    Matrix parse_rows(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (pos_ >= lines_.size())
                throw ParseError("unexpected end of file inside a matrix block", 0, 0);
            const auto& r = next();
            if (r.toks.size() != n)
                fail(r, 0, "matrix row must have " + std::to_string(n) + " entries");
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = rational_at(r, j);
        }
        if (pos_ >= lines_.size())
            throw ParseError("missing 'end' after a matrix block", 0, 0);
        const auto& e = next();
        if (e.toks.size() != 1 || e.toks[0].text != "end")
            fail(e, 0, "expected 'end' after " + std::to_string(n) + " matrix rows");
        return m;
    }

    static std::vector< Rational > field_elem_at(const Line& l, std::size_t k, std::size_t d)
    {
        const std::string& s = l.toks.at(k).text;
        std::vector< Rational > v;
        if (!s.empty() && s.front() == '[')
        {
            if (s.back() != ']')
                fail(l, k, "unterminated field element");
            std::string body = s.substr(1, s.size() - 2);
            std::stringstream ss(body);
            std::string part;
            while (std::getline(ss, part, ','))
            {
                try
                {
                    v.push_back(parse_rational(part));
                }
                catch (const std::invalid_argument& e)
                {
                    fail(l, k, e.what());
                }
            }
            if (v.size() > d)
                fail(l, k, "field element has more than " + std::to_string(d) + " coordinates");
        }
        else
            v.push_back(rational_at(l, k));
        v.resize(d);
        return v;
    }

    static void parse_heis(const Line& l, const GroupSpec& g, NamedElement& e)
    {
        std::size_t k = 2;
        for (std::size_t f = 0; f < g.factors.size(); ++f)
        {
            const auto& fac = g.factors[f];
            if (f > 0)
            {
                if (k >= l.toks.size() || l.toks[k].text != "|")
                    fail(l, std::min(k, l.toks.size() - 1), "expected '|' between factor components");
                ++k;
            }
            HeisComponent comp;
            for (const char* part : {"a", "b"})
            {
                if (k >= l.toks.size() || l.toks[k].text != part)
                    fail(l, std::min(k, l.toks.size() - 1), std::string("expected '") + part + "'");
                ++k;
                auto& vec = std::string(part) == "a" ? comp.a : comp.b;
                for (std::size_t i = 0; i + 2 < fac.n; ++i, ++k)
                {
                    if (k >= l.toks.size())
                        fail(l, l.toks.size() - 1, "too few field elements");
                    vec.push_back(field_elem_at(l, k, fac.degree()));
                }
            }
            if (k >= l.toks.size() || l.toks[k].text != "c")
                fail(l, std::min(k, l.toks.size() - 1), "expected 'c'");
            ++k;
            if (k >= l.toks.size())
                fail(l, l.toks.size() - 1, "missing corner entry");
            comp.c = field_elem_at(l, k, fac.degree());
            ++k;
            e.components.push_back(std::move(comp));
        }
        if (k != l.toks.size())
            fail(l, k, "unexpected trailing fields");
    }

    static void add_element(InstanceFile& f, NamedElement e, const Line& l)
    {
        if (f.find(e.name))
            fail(l, 1, "element '" + e.name + "' defined twice");
        f.elements.push_back(std::move(e));
    }

    static void check_references(const InstanceFile& f)
    {
        auto known = [&](const std::string& n) {
            if (!f.find(n) && n != "I")
                throw ParseError("reference to undefined element '" + n + "'", 0, 0);
        };
        if (f.problem == InstanceFile::Problem::Intersection)
        {
            if (f.sets.empty())
                throw ParseError("intersection problem without 'set' lines", 0, 0);
            for (const auto& [name, members] : f.sets)
                for (const auto& m : members)
                    known(m);
        }
        if (f.problem == InstanceFile::Problem::Orbit)
        {
            if (f.T.empty() || f.S.empty())
                throw ParseError("orbit problem needs 'T =' and 'S =' lines", 0, 0);
            known(f.T);
            known(f.S);
            for (const auto& m : f.G)
                known(m);
            for (const auto& m : f.H)
                known(m);
        }
    }

    std::vector< Line > lines_;
    std::size_t pos_ = 0;
};

inline std::string field_elem_text(const std::vector< Rational >& v)
{
    if (v.size() == 1)
        return to_string(v[0]);
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + to_string(v[i]);
    return s + "]";
}

inline std::string factor_text(const HeisenbergFactor& f)
{
    std::string s = "heisenberg-k " + std::to_string(f.n) + " minpoly";
    for (const auto& c : f.minpoly)
        s += " " + to_string(c);
    return s;
}
} // namespace detail

inline InstanceFile parse_instance(std::istream& in) { return detail::Parser(in).parse(); }

inline InstanceFile parse_instance_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_instance(in);
}

inline InstanceFile parse_instance_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'", 0, 0);
    return parse_instance(in);
}

/// Text form accepted by parse_instance; parse_instance_text(serialize(f)) == f.
inline std::string serialize(const InstanceFile& f)
{
    std::ostringstream os;
    os << "nilsemi " << f.version << "\n";
    switch (f.group.kind)
    {
    case GroupSpec::Kind::UtQ: os << "group ut-q " << f.group.n << "\n"; break;
    case GroupSpec::Kind::HeisenbergK: os << "group " << detail::factor_text(f.group.factors.at(0)) << "\n"; break;
    case GroupSpec::Kind::Product:
        os << "group product\n";
        for (const auto& fac : f.group.factors)
            os << "factor " << detail::factor_text(fac) << "\n";
        break;
    }
    for (const auto& e : f.elements)
    {
        if (e.form == NamedElement::Form::Heis)
        {
            os << "heis " << e.name;
            for (std::size_t k = 0; k < e.components.size(); ++k)
            {
                const auto& c = e.components[k];
                if (k)
                    os << " |";
                os << " a";
                for (const auto& v : c.a)
                    os << " " << detail::field_elem_text(v);
                os << " b";
                for (const auto& v : c.b)
                    os << " " << detail::field_elem_text(v);
                os << " c " << detail::field_elem_text(c.c);
            }
            os << "\n";
            continue;
        }
        os << (e.form == NamedElement::Form::Matrix ? "matrix " : "lie ") << e.name << "\n";
        for (std::size_t i = 0; i < e.matrix.rows(); ++i)
        {
            for (std::size_t j = 0; j < e.matrix.cols(); ++j)
                os << (j ? " " : "") << to_string(e.matrix(i, j));
            os << "\n";
        }
        os << "end\n";
    }
    if (f.problem == InstanceFile::Problem::Intersection)
    {
        os << "problem intersection\n";
        for (const auto& [name, members] : f.sets)
        {
            os << "set " << name << " =";
            for (const auto& m : members)
                os << " " << m;
            os << "\n";
        }
    }
    else if (f.problem == InstanceFile::Problem::Orbit)
    {
        os << "problem orbit\nT = " << f.T << "\nS = " << f.S << "\nG =";
        for (const auto& m : f.G)
            os << " " << m;
        os << "\nH =";
        for (const auto& m : f.H)
            os << " " << m;
        os << "\n";
    }
    for (const auto& [k, v] : f.options)
        os << "option " << k << " " << v << "\n";
    return os.str();
}

} // namespace nilsemi

#endif // NILSEMI_INSTANCE_HPP
