#include "phase_atlas/vfield/fixture.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

#ifndef PHASE_ATLAS_DEFAULT_FIXTURES
#define PHASE_ATLAS_DEFAULT_FIXTURES "fixtures"
#endif

namespace phase_atlas {

const VectorField& FixtureSet::field(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end())
        throw Error("no field named '" + name + "' in fixtures");
    return it->second;
}

const RationalMap& FixtureSet::map(const std::string& name) const {
    auto it = maps.find(name);
    if (it == maps.end())
        throw Error("no map named '" + name + "' in fixtures");
    return it->second;
}

namespace {

struct Line {
    std::string text;    // comment stripped, trailing space removed
    std::size_t number;  // 1-based
    std::size_t indent;  // column of the first non-blank, 0-based
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
            raw.pop_back();
        std::size_t first = raw.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        out.push_back({raw, n, first});
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

class Reader {
  public:
    Reader(const FixtureSource& src, FixtureSet& out)
        : src_(src), lines_(split_lines(src.text)), out_(out) {}

    static void collect_declarations(const FixtureSource& src, std::vector<Indeterminate>& decls) {
        for (const auto& line : split_lines(src.text)) {
            auto w = words(line.text);
            std::optional<IndeterminateKind> kind;
            if (w[0] == "state") kind = IndeterminateKind::state;
            else if (w[0] == "time") kind = IndeterminateKind::time;
            else if (w[0] == "param") kind = IndeterminateKind::parameter;
            else if (w[0] == "coeff") kind = IndeterminateKind::coefficient;
            if (!kind)
                continue;
            for (std::size_t i = 1; i < w.size(); ++i) {
                if (!is_identifier(w[i]))
                    throw ParseError(src.name + ": bad identifier '" + w[i] + "'", line.number, 1);
                auto same = std::find_if(decls.begin(), decls.end(),
                                         [&](const Indeterminate& d) { return d.name == w[i]; });
                if (same == decls.end())
                    decls.push_back({w[i], *kind});
                else if (same->kind != *kind)
                    throw ParseError(src.name + ": '" + w[i] + "' redeclared as " +
                                         std::string(to_string(*kind)),
                                     line.number, 1);
            }
        }
    }

    void run() {
        while (pos_ < lines_.size()) {
            const Line& line = lines_[pos_];
            auto w = words(line.text);
            const std::string& head = w[0];
            if (head == "state" || head == "time" || head == "param" || head == "coeff") {
                ++pos_;
            } else if (head == "field") {
                read_field();
            } else if (head == "map") {
                read_map();
            } else if (head == "step" || head == "setup") {
                read_step();
            } else if (head == "terminal") {
                read_terminal();
            } else if (head == "point") {
                read_point();
            } else {
                fail("unknown directive '" + head + "'", line);
            }
        }
    }

  private:
    [[noreturn]] void fail(const std::string& what, const Line& line, std::size_t col = 0) const {
        throw ParseError(src_.name + ": " + what, line.number, col ? col : line.indent + 1);
    }

    const Line& next_line(const char* block) {
        if (pos_ >= lines_.size())
            throw ParseError(src_.name + ": unterminated " + block + " block",
                             lines_.empty() ? 1 : lines_.back().number, 1);
        return lines_[pos_++];
    }

    RationalExpr expression(const Line& line, std::size_t offset) {
        return parse_expression(std::string_view(line.text).substr(offset), out_.context,
                                line.number, offset + 1);
    }

    VarIndex variable(const std::string& name, const Line& line) {
        auto idx = out_.context->find(name);
        if (!idx)
            fail("undeclared identifier '" + name + "'", line);
        return *idx;
    }

    std::vector<VarIndex> tuple(std::string_view text, const Line& line) {
        std::string s = trim(text);
        if (s.size() < 2 || s.front() != '(' || s.back() != ')')
            fail("expected a parenthesized coordinate list", line);
        std::vector<VarIndex> out;
        std::stringstream in(s.substr(1, s.size() - 2));
        std::string item;
        while (std::getline(in, item, ','))
            out.push_back(variable(trim(item), line));
        return out;
    }

    /// Splits "lhs = rhs" and returns (lhs, offset of rhs in line.text).
    std::pair<std::string, std::size_t> assignment(const Line& line) {
        auto eq = line.text.find('=');
        if (eq == std::string::npos)
            fail("expected 'name = expression'", line);
        return {trim(std::string_view(line.text).substr(0, eq)), eq + 1};
    }

    template <class M, class V>
    void insert_unique(M& m, const std::string& name, V value, const Line& line) {
        if (m.count(name))
            fail("duplicate definition of '" + name + "'", line);
        m.emplace(name, std::move(value));
    }

    void read_field() {
        const Line& head = lines_[pos_++];
        std::string rest = trim(std::string_view(head.text).substr(head.text.find("field") + 5));
        auto paren = rest.find('(');
        if (paren == std::string::npos)
            fail("expected 'field NAME (coords)'", head);
        std::string name = trim(rest.substr(0, paren));
        auto coords = tuple(rest.substr(paren), head);
        std::vector<std::optional<RationalExpr>> rhs(coords.size());
        for (;;) {
            const Line& line = next_line("field");
            if (trim(line.text) == "end")
                break;
            auto [lhs, off] = assignment(line);
            if (lhs.size() < 5 || lhs[0] != 'd' || lhs.substr(lhs.size() - 3) != "/dt")
                fail("expected 'd<coord>/dt = expression'", line);
            VarIndex c = variable(lhs.substr(1, lhs.size() - 4), line);
            auto it = std::find(coords.begin(), coords.end(), c);
            if (it == coords.end())
                fail("'" + lhs + "' is not a derivative of a coordinate of " + name, line);
            auto& slot = rhs[it - coords.begin()];
            if (slot)
                fail("second equation for " + lhs, line);
            slot = expression(line, off);
        }
        std::vector<RationalExpr> values;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            if (!rhs[i])
                fail("field " + name + " lacks an equation for d" +
                         (*out_.context)[coords[i]].name + "/dt",
                     head);
            values.push_back(*rhs[i]);
        }
        insert_unique(out_.fields, name, VectorField(name, coords, std::move(values)), head);
    }

    void read_map() {
        const Line& head = lines_[pos_++];
        std::string rest = trim(std::string_view(head.text).substr(head.text.find("map") + 3));
        auto paren = rest.find('(');
        auto arrow = rest.find("->");
        if (paren == std::string::npos || arrow == std::string::npos || arrow < paren)
            fail("expected 'map NAME (source) -> (target)'", head);
        std::string name = trim(rest.substr(0, paren));
        auto source = tuple(rest.substr(paren, arrow - paren), head);
        auto target = tuple(rest.substr(arrow + 2), head);

        enum class Section { forward, inverse, params } section = Section::forward;
        std::vector<std::optional<RationalExpr>> fwd(target.size()), inv(source.size());
        Bindings params;
        for (;;) {
            const Line& line = next_line("map");
            std::string t = trim(line.text);
            if (t == "end")
                break;
            if (t == "inverse") {
                section = Section::inverse;
                continue;
            }
            if (t == "params") {
                section = Section::params;
                continue;
            }
            auto [lhs, off] = assignment(line);
            VarIndex v = variable(lhs, line);
            auto put = [&](const std::vector<VarIndex>& vars,
                           std::vector<std::optional<RationalExpr>>& slots, const char* side) {
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end())
                    fail("'" + lhs + "' is not a " + side + " coordinate of map " + name, line);
                auto& slot = slots[it - vars.begin()];
                if (slot)
                    fail("second definition of " + lhs, line);
                slot = expression(line, off);
            };
            switch (section) {
            case Section::forward: put(target, fwd, "target"); break;
            case Section::inverse: put(source, inv, "source"); break;
            case Section::params:
                if ((*out_.context)[v].kind != IndeterminateKind::parameter)
                    fail("'" + lhs + "' is not a parameter", line);
                params.emplace(v, expression(line, off));
                break;
            }
        }
        auto unwrap = [&](std::vector<std::optional<RationalExpr>>& slots,
                          const std::vector<VarIndex>& vars, const char* what) {
            std::vector<RationalExpr> out;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!slots[i])
                    fail("map " + name + " lacks " + what + " component for " +
                             (*out_.context)[vars[i]].name,
                         head);
                out.push_back(*slots[i]);
            }
            return out;
        };
        auto f = unwrap(fwd, target, "a forward");
        auto g = unwrap(inv, source, "an inverse");
        insert_unique(out_.maps, name,
                      RationalMap(name, source, target, std::move(f), std::move(g),
                                  std::move(params)),
                      head);
    }

    void read_step() {
        const Line& head = lines_[pos_++];
        auto w = words(head.text);
        StepRecord step;
        step.file = src_.name;
        step.line = head.number;
        if (w[0] == "setup") {
            if (w.size() != 2)
                fail("expected 'setup NAME'", head);
            step.id = w[1];
            step.kind = "setup";
        } else {
            if (w.size() != 3 && !(w.size() == 4 && w[3] == "derived"))
                fail("expected 'step ID KIND [derived]'", head);
            step.id = w[1];
            step.kind = w[2];
            step.derived = w.size() == 4;
            static const std::vector<std::string> kinds{"blow_up_point", "blow_up_curve",
                                                        "blow_down_surface", "flop"};
            if (std::find(kinds.begin(), kinds.end(), step.kind) == kinds.end())
                fail("unknown step kind '" + step.kind + "'", head);
        }
        for (;;) {
            const Line& line = next_line("step");
            std::string t = trim(line.text);
            if (t == "end")
                break;
            if (t.rfind("center", 0) == 0) {
                auto colon = line.text.find(':');
                if (colon == std::string::npos)
                    fail("expected 'center NAME: eq, eq'", line);
                CenterRecord c;
                c.name = trim(std::string_view(line.text).substr(line.indent + 6,
                                                                 colon - line.indent - 6));
                std::size_t start = colon + 1;
                for (;;) {
                    std::size_t comma = line.text.find(',', start);
                    std::string_view piece = std::string_view(line.text).substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start);
                    auto e = parse_expression(piece, out_.context, line.number, start + 1);
                    if (!e.is_polynomial())
                        fail("center equations must be polynomial", line, start + 1);
                    c.equations.push_back(e.numerator());
                    if (comma == std::string::npos)
                        break;
                    start = comma + 1;
                }
                step.centers.push_back(std::move(c));
                continue;
            }
            step.applications.push_back(read_apply(line));
        }
        out_.steps.push_back(std::move(step));
    }

    ApplyRecord read_apply(const Line& line) {
        // RESULT = MAP(SOURCE) [expect NAME] [printed NAME]
        ApplyRecord a;
        a.line = line.number;
        auto [lhs, off] = assignment(line);
        a.result = lhs;
        std::string rhs = trim(std::string_view(line.text).substr(off));
        auto open = rhs.find('('), close = rhs.find(')');
        if (!is_identifier(a.result) || open == std::string::npos || close == std::string::npos ||
            close < open)
            fail("expected 'RESULT = MAP(SOURCE)'", line);
        a.map = trim(rhs.substr(0, open));
        a.source = trim(rhs.substr(open + 1, close - open - 1));
        auto w = words(rhs.substr(close + 1));
        for (std::size_t i = 0; i < w.size(); i += 2) {
            if (i + 1 >= w.size())
                fail("dangling '" + w[i] + "'", line);
            if (w[i] == "expect")
                a.expect = w[i + 1];
            else if (w[i] == "printed")
                a.printed = w[i + 1];
            else
                fail("unknown clause '" + w[i] + "'", line);
        }
        return a;
    }

    void read_terminal() {
        const Line& line = lines_[pos_++];
        auto w = words(line.text);
        if (w.size() != 4 || w[2] != "=")
            fail("expected 'terminal FIELD = MAP'", line);
        out_.terminals.push_back({w[1], w[3], line.number});
    }

    Rational rational(const std::string& s, const Line& line) {
        try {
            Rational q(s);
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            fail("bad rational '" + s + "'", line);
        }
    }

    void read_point() {
        // point NAME [h0:h1:h2:h3] chart CHART index (a, b, c) type TYPE DIM [local FIELD]
        const Line& line = lines_[pos_++];
        PointRecord p;
        p.line = line.number;
        std::string t = line.text;
        auto lb = t.find('['), rb = t.find(']');
        auto lp = t.find('(', rb == std::string::npos ? 0 : rb), rp = t.find(')', lp);
        if (lb == std::string::npos || rb == std::string::npos || lp == std::string::npos ||
            rp == std::string::npos)
            fail("expected 'point NAME [h:h:h:h] chart C index (a, b, c) type T DIM'", line);
        auto head = words(t.substr(0, lb));
        if (head.size() != 2)
            fail("expected 'point NAME'", line);
        p.name = head[1];
        std::stringstream hs(t.substr(lb + 1, rb - lb - 1));
        std::string item;
        std::size_t k = 0;
        while (std::getline(hs, item, ':')) {
            if (k == 4)
                fail("too many homogeneous coordinates", line);
            p.homogeneous[k++] = rational(trim(item), line);
        }
        if (k != 4)
            fail("need four homogeneous coordinates", line);
        auto mid = words(t.substr(rb + 1, lp - rb - 1));
        if (mid.size() != 3 || mid[0] != "chart" || mid[2] != "index")
            fail("expected 'chart C index'", line);
        p.chart = mid[1];
        std::stringstream is(t.substr(lp + 1, rp - lp - 1));
        k = 0;
        while (std::getline(is, item, ',')) {
            if (k == 3)
                fail("index has three entries", line);
            p.index[k++] = rational(trim(item), line);
        }
        if (k != 3)
            fail("index has three entries", line);
        auto tail = words(t.substr(rp + 1));
        if ((tail.size() != 3 && tail.size() != 5) || tail[0] != "type" ||
            (tail.size() == 5 && tail[3] != "local"))
            fail("expected 'type T DIM [local FIELD]'", line);
        p.type = tail[1];
        try {
            p.family_dimension = std::stoi(tail[2]);
        } catch (const std::exception&) {
            fail("family dimension must be an integer", line);
        }
        if (tail.size() == 5)
            p.local_system = tail[4];
        out_.points.push_back(std::move(p));
    }

    const FixtureSource& src_;
    std::vector<Line> lines_;
    FixtureSet& out_;
    std::size_t pos_ = 0;
};

} // namespace

FixtureSet parse_fixtures(const std::vector<FixtureSource>& sources) {
    std::vector<Indeterminate> decls;
    for (const auto& s : sources)
        Reader::collect_declarations(s, decls);
    if (std::count_if(decls.begin(), decls.end(),
                      [](const Indeterminate& d) { return d.kind == IndeterminateKind::time; }) > 1)
        throw Error("fixtures declare more than one time variable");
    FixtureSet out;
    out.context = Context::make(std::move(decls));
    for (const auto& s : sources)
        Reader(s, out).run();
    return out;
}

FixtureSet load_fixtures(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw Error("fixture directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pa")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<FixtureSource> sources;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream buf;
        buf << in.rdbuf();
        sources.push_back({f.filename().string(), buf.str()});
    }
    return parse_fixtures(sources);
}

std::filesystem::path default_fixture_dir() {
    if (const char* env = std::getenv("PHASE_ATLAS_FIXTURES"); env && *env)
        return env;
    return PHASE_ATLAS_DEFAULT_FIXTURES;
}

} // namespace phase_atlas
