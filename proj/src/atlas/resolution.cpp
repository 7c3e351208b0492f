#include "phase_atlas/atlas/resolution.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas {

VectorField apply_resolution_step(const VectorField& f, const RationalMap& substitution,
                                  const VectorField* expected) {
    VectorField g = pushforward(f, substitution);
    if (expected) {
        auto diffs = compare_fields(g, *expected);
        if (!diffs.empty()) {
            std::string msg = substitution.name() + " does not reproduce " + expected->label();
            for (const auto& d : diffs)
                msg += "; " + d;
            throw VerificationError(msg);
        }
    }
    return g;
}

bool ReplayReport::ok() const {
    for (const auto& r : results)
        if (!r.error.empty() || (r.golden && !r.matched_golden) || !r.legal)
            return false;
    return std::all_of(terminals.begin(), terminals.end(),
                       [](const TerminalResult& t) { return t.ok(); });
}

namespace {

std::vector<std::string> pole_summary(const VectorField& g) {
    std::vector<std::string> out;
    const Context& ctx = *g.context();
    for (VarIndex c : g.coords()) {
        auto orders = pole_order(g, Polynomial::variable(g.context(), c));
        if (std::all_of(orders.begin(), orders.end(), [](int k) { return k == 0; }))
            continue;
        std::string s = ctx[c].name + ": (";
        for (std::size_t i = 0; i < orders.size(); ++i)
            s += (i ? "," : "") + std::to_string(orders[i]);
        out.push_back(s + ")");
    }
    return out;
}

/// One coordinate c carries all poles, each simple, and dc/dt is polynomial.
bool simple_pole_form(const VectorField& g) {
    std::optional<Polynomial> divisor;
    for (const auto& r : g.rhs()) {
        if (r.is_polynomial())
            continue;
        if (divisor && !(r.denominator() == *divisor))
            return false;
        divisor = r.denominator();
    }
    if (!divisor)
        return true;
    auto vars = divisor->variables();
    if (vars.size() != 1 || !divisor->is_monomial() || divisor->total_degree() != 1)
        return false;
    auto pos = g.position_of(vars.front());
    return pos && g.rhs()[*pos].is_polynomial();
}

} // namespace

ReplayReport replay_resolution(const FixtureSet& fixtures, const Bindings& specialization) {
    ReplayReport rep;
    auto specialize_field = [&](const VectorField& f) {
        return specialization.empty() ? f : f.specialized(specialization);
    };
    auto specialize_map = [&](const RationalMap& m) {
        return specialization.empty() ? m : m.specialized(specialization);
    };

    std::map<std::string, VectorField> computed;
    // composite map from the base field's coordinates, for fields reached from it
    std::map<std::string, RationalMap> composite;
    computed.emplace(kBaseField, specialize_field(fixtures.field(kBaseField)));

    auto source_field = [&](const std::string& name) -> VectorField {
        if (auto it = computed.find(name); it != computed.end())
            return it->second;
        return specialize_field(fixtures.field(name));
    };

    for (const auto& step : fixtures.steps) {
        if (step.kind != "setup") {
            auto& ids = step.derived ? rep.derived_steps : rep.typeset_steps;
            if (std::find(ids.begin(), ids.end(), step.id) == ids.end())
                ids.push_back(step.id);
        }
        for (const auto& app : step.applications) {
            auto start = std::chrono::steady_clock::now();
            StepResult r;
            r.step = step.id;
            r.kind = step.kind;
            r.derived = step.derived;
            r.result = app.result;
            r.map = app.map;
            r.golden = app.expect;
            try {
                RationalMap m = specialize_map(fixtures.map(app.map));
                VectorField g = pushforward(source_field(app.source), m).relabeled(app.result);
                if (app.expect) {
                    r.mismatches = compare_fields(g, specialize_field(fixtures.field(*app.expect)));
                    r.matched_golden = r.mismatches.empty();
                }
                if (app.printed)
                    r.typeset_differences =
                        compare_fields(g, specialize_field(fixtures.field(*app.printed)));
                r.pole_summary = pole_summary(g);
                if (step.derived)
                    r.legal = simple_pole_form(g);
                if (app.source == kBaseField)
                    composite.insert_or_assign(app.result, m);
                else if (auto it = composite.find(app.source); it != composite.end())
                    composite.insert_or_assign(app.result, compose(it->second, m));
                computed.insert_or_assign(app.result, std::move(g));
            } catch (const Error& e) {
                r.error = e.what();
            }
            r.ms_elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
            rep.results.push_back(std::move(r));
        }
    }

    for (const auto& term : fixtures.terminals) {
        TerminalResult t;
        t.field = term.field;
        t.chart = term.chart;
        auto f = computed.find(term.field);
        auto c = composite.find(term.field);
        if (f == computed.end() || c == composite.end()) {
            t.detail = "field " + term.field + " was not produced from " + kBaseField;
            rep.terminals.push_back(std::move(t));
            continue;
        }
        try {
            RationalMap chart = specialize_map(fixtures.map(term.chart));
            t.map_matches = same_forward(c->second, chart);
            t.polynomial = std::all_of(f->second.rhs().begin(), f->second.rhs().end(),
                                       [&](const RationalExpr& r) {
                                           return r.is_polynomial_in(f->second.coords());
                                       });
            if (!t.map_matches) {
                t.detail = "composite map differs from " + term.chart + ":";
                const Context& ctx = *chart.context();
                for (std::size_t i = 0; i < chart.target().size(); ++i)
                    if (c->second.target() != chart.target() ||
                        !(c->second.forward()[i] == chart.forward()[i]))
                        t.detail += " " + ctx[c->second.target()[i]].name + " = " +
                                    to_string(c->second.forward()[i]);
            } else if (!t.polynomial) {
                t.detail = "terminal field is not polynomial";
            }
        } catch (const Error& e) {
            t.detail = e.what();
        }
        rep.terminals.push_back(std::move(t));
    }
    return rep;
}

} // namespace phase_atlas
