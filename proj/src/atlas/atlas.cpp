#include "phase_atlas/atlas/atlas.hpp"

#include <chrono>
#include <future>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas {

namespace {

RationalMap identity_on(const VectorField& base) {
    std::vector<RationalExpr> comps;
    for (VarIndex c : base.coords())
        comps.emplace_back(Polynomial::variable(base.context(), c));
    return RationalMap("U0", base.coords(), base.coords(), comps, comps);
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string chart_name(int j) { return "U" + std::to_string(j); }

} // namespace

Chart make_chart(std::string name, const VectorField& base, const RationalMap& from_U0) {
    VectorField f = pushforward(base, from_U0).relabeled(name);
    return Chart{std::move(name), from_U0, std::move(f)};
}

HolomorphyReport certify_holomorphic(const Chart& chart) {
    HolomorphyReport rep{chart.name, true, {}};
    const Context& ctx = *chart.field.context();
    for (std::size_t i = 0; i < chart.field.dimension(); ++i) {
        const RationalExpr& r = chart.field.rhs()[i];
        if (r.is_polynomial_in(chart.coords()))
            continue;
        rep.polynomial = false;
        rep.offending_terms.push_back("d" + ctx[chart.field.coords()[i]].name +
                                      "/dt: denominator " + to_string(r.denominator()));
    }
    return rep;
}

std::vector<Chart> builtin_atlas(const FixtureSet& fixtures) {
    const VectorField& base = fixtures.field(kBaseField);
    std::vector<Chart> out;
    out.push_back(Chart{"U0", identity_on(base), base.relabeled("U0")});
    for (int j = 1; j <= 7; ++j) {
        const RationalMap& m = fixtures.map(chart_name(j));
        m.verify();
        Chart c = make_chart(chart_name(j), base, m);
        auto rep = certify_holomorphic(c);
        if (!rep.polynomial) {
            std::string msg = "chart " + c.name + " is not holomorphic";
            for (const auto& t : rep.offending_terms)
                msg += "; " + t;
            throw VerificationError(msg);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ChartCheck> check_atlas(const FixtureSet& fixtures) {
    std::vector<std::future<ChartCheck>> jobs;
    for (int j = 1; j <= 7; ++j) {
        jobs.push_back(std::async(std::launch::async, [&fixtures, j] {
            auto start = std::chrono::steady_clock::now();
            ChartCheck c;
            c.chart = chart_name(j);
            try {
                const RationalMap& m = fixtures.map(c.chart);
                auto defects = m.round_trip_defects();
                c.round_trip = defects.empty();
                c.problems = defects;
                if (c.round_trip) {
                    auto rep = certify_holomorphic(make_chart(c.chart, fixtures.field(kBaseField), m));
                    c.polynomial = rep.polynomial;
                    c.problems.insert(c.problems.end(), rep.offending_terms.begin(),
                                      rep.offending_terms.end());
                }
            } catch (const Error& e) {
                c.problems.push_back(e.what());
            }
            c.ms_elapsed = ms_since(start);
            return c;
        }));
    }
    std::vector<ChartCheck> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

std::vector<TransitionCheck> check_transitions(const std::vector<Chart>& charts) {
    std::vector<std::future<TransitionCheck>> jobs;
    for (const auto& a : charts)
        for (const auto& b : charts) {
            if (&a == &b)
                continue;
            jobs.push_back(std::async(std::launch::async, [&a, &b] {
                TransitionCheck t;
                t.from = a.name;
                t.to = b.name;
                try {
                    RationalMap tr = compose(a.to_U0(), b.from_U0);
                    tr.verify();
                    // Chain rule in source coordinates: L_f(F_i) = g_i(F), cleared.
                    const auto forward = tr.forward_bindings();
                    t.consistent = true;
                    for (VarIndex c : b.field.coords()) {
                        const RationalExpr lhs = a.field.lie_derivative(forward.at(c));
                        auto [num, den] = substitute_cleared(b.field.rhs_for(c), forward);
                        if (lhs.numerator() * den != num * lhs.denominator()) {
                            t.consistent = false;
                            t.detail = "d" + (*b.field.context())[c].name + "/dt disagrees on the overlap";
                            break;
                        }
                    }
                } catch (const Error& e) {
                    t.detail = e.what();
                }
                return t;
            }));
        }
    std::vector<TransitionCheck> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

} // namespace phase_atlas
