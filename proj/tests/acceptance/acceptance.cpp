// Acceptance run: one PASS/FAIL line per criterion; exits non-zero on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "phase_atlas/cli/report.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/mero/mero.hpp"

using namespace phase_atlas;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const Check* find(const Report& r, std::string_view name) {
    for (const auto& c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

// Every named check must exist and pass; the first offender is reported.
Outcome require(const Report& r, std::initializer_list<std::string_view> names, std::string summary) {
    for (auto name : names) {
        const Check* c = find(r, name);
        if (!c)
            return {false, "missing check " + std::string(name)};
        if (c->status != Status::pass)
            return {false, std::string(name) + ": " + c->detail};
    }
    return {true, std::move(summary)};
}

std::size_t count_prefix(const Report& r, std::string_view prefix, Status s) {
    std::size_t n = 0;
    for (const auto& c : r.checks)
        if (c.name.starts_with(prefix) && c.status == s)
            ++n;
    return n;
}

Outcome atlas_holomorphy(const FixtureSet& fx) {
    const Report r = verify_atlas(fx);
    double ms = 0;
    for (const auto& c : r.data.at("charts"))
        ms += c.at("ms_elapsed").get<double>();
    auto out = require(r, {"atlas/U1", "atlas/U2", "atlas/U3", "atlas/U4", "atlas/U5", "atlas/U6", "atlas/U7"},
                       "7/7 charts polynomial");
    if (out.passed && ms >= 10'000)
        out = {false, "chart checks took " + std::to_string(ms) + " ms"};
    out.detail += ", " + std::to_string(static_cast<int>(ms)) + " ms";
    return out;
}

Outcome singularity_table(const FixtureSet& fx) {
    const Report r = verify_singularities(fx);
    auto out = require(r,
                       {"singularities/P1", "singularities/P2", "singularities/P3", "singularities/P4",
                        "singularities/P5", "singularities/P6", "singularities/P7", "singularities/distinct-points"},
                       "seven accessible points, coordinates and indices equal to the table");
    if (out.passed && r.data.at("rows").size() != 7)
        out = {false, std::to_string(r.data.at("rows").size()) + " rows"};
    return out;
}

Outcome resolution_replay(const FixtureSet& fx) {
    const Report r = verify_resolution(fx);
    if (const auto failed = count_prefix(r, "resolution/", Status::fail))
        return {false, std::to_string(failed) + " failing resolution checks"};
    std::size_t golden = 0;
    for (const auto& c : r.checks)
        if (c.detail.starts_with("equals golden"))
            ++golden;
    // Local systems P1, P2, P3, P4, P7 and the 4.1.2, 4.1.3, 4.3.1, 4.3.2 outputs.
    if (golden < 9)
        return {false, std::to_string(golden) + " printed systems reproduced, 9 expected"};
    auto out = require(r, {"resolution/blown-down-index"}, "");
    if (out.passed)
        out.detail = std::to_string(golden) + " printed systems reproduced; blown-down index " +
                     r.data.at("blown_down_index").get<std::string>();
    return out;
}

Outcome symmetry_invariance(const Report& sym) {
    return require(sym, {"symmetry/invariance s1", "symmetry/invariance s2"},
                   "s1 and s2 residuals vanish identically");
}

Outcome invariant_family(const Report& sym) {
    auto out = require(sym,
                       {"symmetry/family-dimension", "symmetry/family-contains-base-field", "symmetry/quadratic-span"},
                       "dimension 8, contains the base field, quadratic and t-linear parts match");
    if (out.passed) {
        const auto reported = count_prefix(sym, "symmetry/printed-constants", Status::warn);
        out.detail += "; " + std::to_string(reported) + " constant-term discrepancies reported";
    }
    return out;
}

Outcome decoupling(const Report& sym) {
    return require(sym, {"symmetry/decoupling", "symmetry/p3-index", "symmetry/p3-index-at-a1=-1"},
                   "A5 = 2*A1; index (-A1, -A1, -A1); A1 = -1 matches row P3");
}

Outcome reductions(const Report& sym) {
    return require(sym, {"symmetry/noumi-yamada", "symmetry/x0-invariant-iff-a1-zero", "symmetry/painleve-iv"},
                   "reduction matches under a computed renaming; x = 0 invariant iff a1 = 0; PIV recovered");
}

Outcome pole_crossing(const FixtureSet& fx) {
    const PhaseSpace space(fx);
    const Params alpha{0.5, 1.0 / 3, 0.2};
    IntegratorConfig coarse_cfg, fine_cfg;
    coarse_cfg.rel_tol = coarse_cfg.abs_tol = 1e-10;
    fine_cfg.rel_tol = fine_cfg.abs_tol = 1e-12;
    const auto start = std::chrono::steady_clock::now();
    const auto coarse = integrate_meromorphic(space, {1, 1, 1}, 0, 3, alpha, coarse_cfg);
    const auto fine = integrate_meromorphic(space, {1, 1, 1}, 0, 3, alpha, fine_cfg);
    const double secs = seconds_since(start);

    const auto balances = laurent_balances(fx.field("eq1"));
    std::size_t matched = 0;
    for (const auto& ev : coarse.pole_events)
        if (ev.estimate && matching_balance(ev.estimate->residue, balances, 1e-4))
            ++matched;
    const double dist = endpoint_distance(space, coarse, fine);
    const double rt = std::max(switch_roundtrip_error(space, coarse), switch_roundtrip_error(space, fine));

    std::ostringstream os;
    os << coarse.pole_events.size() << " pole events, " << matched << " residues on a Laurent balance, endpoint "
       << "distance " << dist << ", round trip " << rt << ", " << secs << " s";
    const bool ok = !coarse.pole_events.empty() && matched == coarse.pole_events.size() && dist <= 1e-7 &&
                    rt <= 1e-12 && secs < 5;
    return {ok, os.str()};
}

Outcome integrator_order(const FixtureSet& fx) {
    const PhaseSpace space(fx);
    const Params alpha{0.5, 1.0 / 3, 0.2};
    const Rhs f = [&](std::span<const double> y, double t, std::span<double> out) {
        const State v = space.rhs(0, {y[0], y[1], y[2]}, t, alpha);
        std::copy(v.begin(), v.end(), out.begin());
    };
    const double p = richardson_order(f, {1, 1, 1}, 0, 0.25, 8);
    std::ostringstream os;
    os << "observed order " << p << " on [0, 0.25]";
    return {p >= 4.5, os.str()};
}

Outcome robustness(const FixtureSet& fx) {
    const PhaseSpace space(fx);
    const auto rep = robustness_sweep(space, 100, 20261019, 0, 2);
    std::ostringstream os;
    os << rep.completed << "/" << rep.runs << " completed, " << rep.atlas_incomplete << " atlas-incomplete, "
       << rep.failures.size() << " failures, " << rep.pole_events << " pole events";
    return {rep.runs == 100 && rep.atlas_incomplete == 0, os.str()};
}

Outcome guarded(const std::function<Outcome()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

} // namespace

int main() {
    const FixtureSet fx = load_fixtures(default_fixture_dir());
    const Report sym = verify_symmetry(fx);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"atlas holomorphy", [&] { return atlas_holomorphy(fx); }},
        {"singularity table", [&] { return singularity_table(fx); }},
        {"resolution replay", [&] { return resolution_replay(fx); }},
        {"symmetry invariance", [&] { return symmetry_invariance(sym); }},
        {"invariant family", [&] { return invariant_family(sym); }},
        {"decoupling and P3 index", [&] { return decoupling(sym); }},
        {"reductions", [&] { return reductions(sym); }},
        {"pole crossing", [&] { return pole_crossing(fx); }},
        {"integrator order", [&] { return integrator_order(fx); }},
        {"robustness sweep", [&] { return robustness(fx); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, run] = criteria[i];
        const Outcome o = guarded(run);
        failures += !o.passed;
        std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
