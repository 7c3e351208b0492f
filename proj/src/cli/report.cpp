#include "phase_atlas/cli/report.hpp"

#include <algorithm>
#include <future>

#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/atlas/resolution.hpp"
#include "phase_atlas/singular/singular.hpp"
#include "phase_atlas/symcore/parser.hpp"
#include "phase_atlas/symmetry/symmetry.hpp"

namespace phase_atlas {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& items, std::string_view sep = "; ") {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty())
            out += sep;
        out += s;
    }
    return out;
}

std::string tuple_string(const std::array<Rational, 3>& t) {
    return "(" + to_string(t[0]) + ", " + to_string(t[1]) + ", " + to_string(t[2]) + ")";
}

std::string tuple_string(const std::array<RationalExpr, 3>& t) {
    return "(" + to_string(t[0]) + ", " + to_string(t[1]) + ", " + to_string(t[2]) + ")";
}

json field_json(const VectorField& f) {
    json eqs = json::array();
    const auto names = f.coordinate_names();
    for (std::size_t i = 0; i < f.dimension(); ++i)
        eqs.push_back("d" + names[i] + "/dt = " + to_string(f.rhs()[i]));
    return eqs;
}

std::vector<RationalMap> backlund_maps(const FixtureSet& fx) { return {fx.map("s1"), fx.map("s2")}; }

// Runs `body`; an exception becomes a FAIL check named "<prefix>/error".
template <class F>
Report guarded(std::string command, const std::string& prefix, F&& body) {
    return timed([&] {
        Report r;
        r.command = command;
        try {
            body(r);
        } catch (const std::exception& e) {
            r.add(prefix + "/error", false, e.what());
        }
        return r;
    });
}

} // namespace

std::string_view to_string(Status s) {
    switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::warn: return "WARN";
    }
    return "FAIL";
}

void Report::add(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed ? Status::pass : Status::fail, std::move(detail)});
}

void Report::warn(std::string name, std::string detail) {
    checks.push_back({std::move(name), Status::warn, std::move(detail)});
}

void Report::merge(const Report& other, const std::string& key) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    data[key] = other.data;
}

bool Report::ok() const { return count(Status::fail) == 0; }

std::size_t Report::count(Status s) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [s](const Check& c) { return c.status == s; }));
}

json Report::to_json() const {
    json cs = json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name}, {"status", std::string(phase_atlas::to_string(c.status))}, {"detail", c.detail}});
    return {{"command", command}, {"checks", cs}, {"elapsed_ms", elapsed_ms}, {"data", data}};
}

Report verify_atlas(const FixtureSet& fixtures) {
    return guarded("verify atlas", "atlas", [&](Report& r) {
        json charts = json::array();
        for (const auto& c : check_atlas(fixtures)) {
            std::string detail = c.ok() ? "polynomial, exact round trip" : join(c.problems);
            r.add("atlas/" + c.chart, c.ok(), detail);
            charts.push_back({{"chart", c.chart},
                              {"polynomial", c.polynomial},
                              {"round_trip", c.round_trip},
                              {"ms_elapsed", c.ms_elapsed},
                              {"problems", c.problems}});
        }
        r.data["charts"] = charts;

        try {
            const auto atlas = builtin_atlas(fixtures);
            const auto tr = check_transitions(atlas);
            std::vector<std::string> bad;
            for (const auto& t : tr)
                if (!t.consistent)
                    bad.push_back(t.from + "->" + t.to + ": " + t.detail);
            const std::size_t good = tr.size() - bad.size();
            r.add("atlas/transitions", bad.empty(),
                  std::to_string(good) + "/" + std::to_string(tr.size()) + " consistent" +
                      (bad.empty() ? "" : "; " + join(bad)));
            r.data["transitions"] = {{"checked", tr.size()}, {"consistent", good}};
        } catch (const Error& e) {
            r.add("atlas/transitions", false, std::string("not checked: ") + e.what());
        }

        json steps = json::array();
        for (const auto& s : replay_resolution(fixtures).results)
            steps.push_back({{"step", s.step},
                             {"result", s.result},
                             {"derived", s.derived},
                             {"matched_golden", s.matched_golden}});
        r.data["steps"] = steps;
    });
}

Report verify_resolution(const FixtureSet& fixtures) {
    return guarded("verify resolution", "resolution", [&](Report& r) {
        const auto rep = replay_resolution(fixtures);
        json steps = json::array();
        for (const auto& s : rep.results) {
            const std::string name = "resolution/" + s.step + " " + s.result;
            if (!s.error.empty())
                r.add(name, false, s.error);
            else if (s.golden)
                r.add(name, s.matched_golden,
                      s.matched_golden ? "equals " + *s.golden : join(s.mismatches));
            else
                r.add(name, s.legal, (s.legal ? "derived; simple poles only: " : "illegal poles: ") +
                                         join(s.pole_summary, ", "));
            if (!s.typeset_differences.empty())
                r.warn(name + " typeset", join(s.typeset_differences));
            steps.push_back({{"step", s.step},
                             {"kind", s.kind},
                             {"result", s.result},
                             {"map", s.map},
                             {"golden", s.golden ? json(*s.golden) : json(nullptr)},
                             {"derived", s.derived},
                             {"matched_golden", s.matched_golden},
                             {"ms_elapsed", s.ms_elapsed}});
        }
        for (const auto& t : rep.terminals)
            r.add("resolution/terminal " + t.field, t.ok(),
                  t.ok() ? "reaches " + t.chart + " with a polynomial field" : t.detail);
        r.data["steps"] = steps;
        r.data["typeset_steps"] = rep.typeset_steps;
        r.data["derived_steps"] = rep.derived_steps;

        const auto& ctx = *fixtures.context;
        const auto idx = local_index(fixtures.field("golden_413"), {0, 0, 0}, ctx.index_of("w2"));
        const auto tuple = idx.constant_tuple();
        const bool ok = tuple && *tuple == std::array<Rational, 3>{0, 2, 1};
        r.add("resolution/blown-down-index", ok, "index at the origin: " + to_string(idx));
        r.data["blown_down_index"] = tuple_string(idx.tuple);
    });
}

Report verify_singularities(const FixtureSet& fixtures) {
    return guarded("verify singularities", "singularities", [&](Report& r) {
        const auto rep = verify_table(fixtures);
        json rows = json::array();
        for (const auto& row : rep.rows) {
            std::string detail;
            if (row.matched())
                detail = to_string(row.homogeneous) + " in " + row.chart + ", index " + tuple_string(*row.index);
            else
                detail = join(row.problems);
            r.add("singularities/" + row.expected.name, row.matched(), detail);
            rows.push_back({{"name", row.expected.name},
                            {"homogeneous", to_string(row.found ? row.homogeneous : row.expected.homogeneous)},
                            {"chart", row.found ? row.chart : row.expected.chart},
                            {"index", row.index ? json(tuple_string(*row.index)) : json(nullptr)},
                            {"index_source", row.index_source},
                            {"expected_type", row.expected.type},
                            {"family_dimension", row.expected.family_dimension},
                            {"also_seen_in", row.also_seen_in},
                            {"matched", row.matched()}});
        }
        std::vector<std::string> extra;
        for (const auto& e : rep.extra)
            extra.push_back(to_string(e.homogeneous) + " in " + e.chart);
        r.add("singularities/distinct-points", rep.distinct_points == rep.rows.size() && rep.extra.empty(),
              std::to_string(rep.distinct_points) + " distinct accessible points, " +
                  std::to_string(rep.matched_rows()) + " matched rows" +
                  (extra.empty() ? "" : "; unexpected: " + join(extra)));
        for (const auto& u : rep.unresolved)
            r.warn("singularities/unresolved", u);
        for (const auto& p : rep.positive_dimensional)
            r.warn("singularities/positive-dimensional", p);
        r.data["rows"] = rows;
        r.data["distinct_points"] = rep.distinct_points;
    });
}

Report verify_symmetry(const FixtureSet& fixtures) {
    return guarded("verify symmetry", "symmetry", [&](Report& r) {
        const auto& ctx = *fixtures.context;
        const auto& eq1 = fixtures.field("eq1");
        const auto maps = backlund_maps(fixtures);
        for (const auto& s : maps) {
            const auto res = invariance_residual(eq1, s);
            const bool zero = std::all_of(res.begin(), res.end(), [](const RationalExpr& e) { return e.is_zero(); });
            std::vector<std::string> parts;
            for (const auto& e : res)
                parts.push_back(to_string(e));
            r.add("symmetry/invariance " + s.name(), zero,
                  zero ? "residuals vanish identically" : "residuals: " + join(parts));
            r.data["residuals"][s.name()] = parts;
        }

        const auto fam = derive_invariant_family(eq1, maps);
        r.add("symmetry/family-dimension", fam.dimension() == 8,
              "nullspace dimension " + std::to_string(fam.dimension()) + " from " + std::to_string(fam.constraints) +
                  " constraints on " + std::to_string(fam.unknowns.size()) + " unknowns");
        r.add("symmetry/family-contains-base-field", fam.contains(eq1), "the base field is a member");
        const auto& printed = fixtures.field("family2");
        const auto cmp = compare_with_printed(fam, printed, maps);
        r.add("symmetry/quadratic-span", cmp.quadratic_span_matches,
              "printed rank " + std::to_string(cmp.printed_rank) + ", quadratic and t-linear columns " +
                  (cmp.quadratic_span_matches ? "span the derived space" : "differ"));
        for (const auto& d : cmp.constant_discrepancies)
            r.warn("symmetry/printed-constants", d);
        for (const auto& d : cmp.free_constant_directions)
            r.warn("symmetry/free-constant-direction", d);
        r.data["family_dimension"] = fam.dimension();
        r.data["printed_family_invariant"] = cmp.printed_invariant;

        const VarIndex A1 = ctx.index_of("A1");
        const VarIndex A5 = ctx.index_of("A5");
        const auto dc = decoupling_check(printed, ctx.index_of("x"));
        std::vector<std::string> conds;
        for (const auto& c : dc.conditions)
            conds.push_back(to_string(c) + " = 0");
        const auto sol = dc.solution.find(A5);
        const auto two_a1 = RationalExpr::variable(fixtures.context, "A1") * RationalExpr::constant(fixtures.context, 2);
        const bool dec_ok = dc.subsystem && dc.solution.size() == 1 && sol != dc.solution.end() && sol->second == two_a1;
        r.add("symmetry/decoupling", dec_ok, "conditions: " + join(conds) +
                                                 (sol != dc.solution.end() ? "; A5 = " + to_string(sol->second) : ""));
        r.data["decoupling_conditions"] = conds;

        const auto decoupled = printed.specialized(dc.solution);
        const auto idx = p3_index_family(fixtures, decoupled);
        const auto minus_a1 = -RationalExpr::variable(fixtures.context, "A1");
        const bool p3_ok = std::all_of(idx.tuple.begin(), idx.tuple.end(), [&](const auto& e) { return e == minus_a1; });
        r.add("symmetry/p3-index", p3_ok, "index at P3: " + tuple_string(idx.tuple));
        r.data["p3_index"] = tuple_string(idx.tuple);

        Bindings at_eq1;
        at_eq1.emplace(A1, RationalExpr::constant(fixtures.context, -1));
        const auto special = p3_index_family(fixtures, decoupled.specialized(at_eq1)).constant_tuple();
        const auto row = std::find_if(fixtures.points.begin(), fixtures.points.end(),
                                      [](const PointRecord& p) { return p.name == "P3"; });
        const bool row_ok = special && row != fixtures.points.end() && *special == row->index;
        r.add("symmetry/p3-index-at-a1=-1", row_ok,
              special ? "A1 = -1 gives " + tuple_string(*special) : std::string("index not constant"));

        const auto ny = ny_reduction_check(fixtures);
        std::vector<std::string> ren;
        for (const auto& [from, to] : ny.renaming)
            ren.push_back(from + "->" + to);
        r.add("symmetry/noumi-yamada", ny.invariant && ny.matched,
              ny.matched ? "x = 0, b1 = 0 reduces to the base field under " + join(ren, ", ") : join(ny.mismatches));
        r.data["noumi_yamada"] = {{"generic_residual", to_string(ny.generic_residual)}, {"renaming", ren}};

        const auto piv = piv_reduction_check(fixtures);
        const auto a1 = RationalExpr::variable(fixtures.context, "a1");
        const bool iff = !piv.generic_residual.is_zero() &&
                         (piv.generic_residual / a1).is_constant() && piv.invariant;
        r.add("symmetry/x0-invariant-iff-a1-zero", iff,
              "d(x)/dt on x = 0 is " + to_string(piv.generic_residual));
        r.add("symmetry/painleve-iv", piv.matched && piv.riccati,
              piv.matched ? "(y, z) system matches piv; dx/dt is a Riccati equation" : join(piv.mismatches));
        if (piv.reduced)
            r.data["painleve_iv"] = field_json(*piv.reduced);
    });
}

Report verify_all(const FixtureSet& fixtures) {
    return timed([&] {
        auto atlas = std::async(std::launch::async, [&] { return verify_atlas(fixtures); });
        auto resolution = std::async(std::launch::async, [&] { return verify_resolution(fixtures); });
        auto singular = std::async(std::launch::async, [&] { return verify_singularities(fixtures); });
        auto symmetry = std::async(std::launch::async, [&] { return verify_symmetry(fixtures); });
        Report r;
        r.command = "verify all";
        r.merge(atlas.get(), "atlas");
        r.merge(resolution.get(), "resolution");
        r.merge(singular.get(), "singularities");
        r.merge(symmetry.get(), "symmetry");
        return r;
    });
}

Report derive_family(const FixtureSet& fixtures) {
    return guarded("derive family", "family", [&](Report& r) {
        const auto maps = backlund_maps(fixtures);
        const auto fam = derive_invariant_family(fixtures.field("eq1"), maps);
        r.add("family/dimension", fam.dimension() == 8, "dimension " + std::to_string(fam.dimension()));
        json basis = json::array();
        for (const auto& v : fam.basis) {
            json entry = json::object();
            for (std::size_t c = 0; c < v.size(); ++c)
                if (v[c] != 0)
                    entry[fam.columns[c]] = to_string(v[c]);
            basis.push_back(entry);
        }
        r.data["dimension"] = fam.dimension();
        r.data["constraints"] = fam.constraints;
        r.data["basis"] = basis;
        r.data["general_member"] = field_json(fam.family);
        const auto affine = derive_invariant_family(fixtures.field("eq1"), maps, true);
        r.data["dimension_with_free_constant"] = affine.dimension();
        const auto cmp = compare_with_printed(fam, fixtures.field("family2"), maps);
        if (cmp.derived_in_printed_letters)
            r.data["derived_in_printed_letters"] = field_json(*cmp.derived_in_printed_letters);
        for (const auto& d : cmp.constant_discrepancies)
            r.warn("family/printed-constants", d);
    });
}

Report derive_p3_index(const FixtureSet& fixtures) {
    return guarded("derive p3-index", "p3-index", [&](Report& r) {
        const auto& ctx = *fixtures.context;
        const auto& printed = fixtures.field("family2");
        const auto dc = decoupling_check(printed, ctx.index_of("x"));
        const auto idx = p3_index_family(fixtures, printed.specialized(dc.solution));
        const auto minus_a1 = -RationalExpr::variable(fixtures.context, "A1");
        const bool ok = std::all_of(idx.tuple.begin(), idx.tuple.end(), [&](const auto& e) { return e == minus_a1; });
        r.add("p3-index", ok, tuple_string(idx.tuple));
        std::vector<std::string> conds;
        for (const auto& c : dc.conditions)
            conds.push_back(to_string(c) + " = 0");
        r.data["condition"] = conds;
        r.data["index"] = tuple_string(idx.tuple);
        r.data["warnings"] = idx.warnings;
    });
}

Report derive_reductions(const FixtureSet& fixtures) {
    return guarded("derive reductions", "reductions", [&](Report& r) {
        const auto ny = ny_reduction_check(fixtures);
        std::vector<std::string> ren;
        for (const auto& [from, to] : ny.renaming)
            ren.push_back(from + "->" + to);
        r.add("reductions/noumi-yamada", ny.invariant && ny.matched,
              ny.matched ? "matches the base field under " + join(ren, ", ") : join(ny.mismatches));
        r.data["noumi_yamada"] = {{"generic_residual", to_string(ny.generic_residual)},
                                  {"renaming", ren},
                                  {"reduced", ny.reduced ? field_json(*ny.reduced) : json(nullptr)}};
        const auto piv = piv_reduction_check(fixtures);
        r.add("reductions/painleve-iv", piv.invariant && piv.matched && piv.riccati,
              piv.matched ? "x = 0 with a1 = 0 carries the piv system" : join(piv.mismatches));
        std::vector<std::string> ric;
        for (const auto& c : piv.riccati_coefficients)
            ric.push_back(to_string(c));
        r.data["painleve_iv"] = {{"generic_residual", to_string(piv.generic_residual)},
                                 {"reduced", piv.reduced ? field_json(*piv.reduced) : json(nullptr)},
                                 {"riccati_coefficients", ric}};
    });
}

} // namespace phase_atlas
