#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phase_atlas/cli/report.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/mero/mero.hpp"
#include "phase_atlas/symcore/parser.hpp"

using namespace phase_atlas;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;

std::string fmt17(double v) {
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    return out;
}

std::array<double, 3> parse_triple(const std::string& flag, const std::string& text) {
    const auto parts = split(text);
    if (parts.size() != 3)
        throw CLI::ValidationError(flag, "expected three comma-separated numbers, got '" + text + "'");
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        std::size_t used = 0;
        try {
            out[i] = std::stod(parts[i], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != parts[i].size() || parts[i].empty() || !std::isfinite(out[i]))
            throw CLI::ValidationError(flag, "'" + parts[i] + "' is not a finite number");
    }
    return out;
}

int emit(const Report& r) {
    std::cout << r.to_json().dump(2) << "\n";
    return r.ok() ? 0 : 1;
}

Report run_verify(const std::string& target, const FixtureSet& fx) {
    if (target == "atlas")
        return verify_atlas(fx);
    if (target == "singularities")
        return verify_singularities(fx);
    if (target == "symmetry")
        return verify_symmetry(fx);
    if (target == "resolution")
        return verify_resolution(fx);
    return verify_all(fx);
}

Report run_derive(const std::string& target, const FixtureSet& fx) {
    if (target == "family")
        return derive_family(fx);
    if (target == "p3-index")
        return derive_p3_index(fx);
    return derive_reductions(fx);
}

struct IntegrateArgs {
    std::string ic;
    std::string alpha = "0,0,0";
    double t0 = 0;
    double t1 = 0;
    double tol = 1e-10;
    double radius = 10;
    double hysteresis = 0.5;
    std::string out = "trajectory.csv";
    std::string events;
};

void write_csv(std::ostream& os, const PhaseSpace& space, const Trajectory& tr) {
    os << "t,chart,c1,c2,c3,x,y,z\n";
    for (const auto& s : tr.samples) {
        State u = space.to_U0(s.chart, s.coords, s.t, tr.params);
        for (const auto& e : tr.pole_events)
            if (e.t_star == s.t)
                for (std::size_t k = 0; k < 3; ++k)
                    if (!e.estimate || e.estimate->diverging[k])
                        u[k] = std::numeric_limits<double>::infinity();
        os << fmt17(s.t) << ',' << space.name(s.chart);
        for (double c : s.coords)
            os << ',' << fmt17(c);
        for (double c : u)
            os << ',' << fmt17(c);
        os << '\n';
    }
}

json events_json(const PhaseSpace& space, const Trajectory& tr, const FixtureSet& fx) {
    static const char* names[] = {"x", "y", "z"};
    const auto balances = laurent_balances(fx.field("eq1"));
    json out = json::array();
    for (const auto& e : tr.pole_events) {
        json ev{{"t_star", e.t_star}, {"chart", space.name(e.chart)}};
        if (e.estimate) {
            json div = json::array();
            for (std::size_t k = 0; k < 3; ++k)
                if (e.estimate->diverging[k])
                    div.push_back(names[k]);
            ev["diverging"] = div;
            ev["residue"] = e.estimate->residue;
            ev["residue_left"] = e.estimate->left;
            ev["residue_right"] = e.estimate->right;
            const auto b = matching_balance(e.estimate->residue, balances, 1e-4);
            ev["laurent_balance"] = b ? json{to_string((*b)[0]), to_string((*b)[1]), to_string((*b)[2])} : json(nullptr);
        } else {
            ev["diverging"] = nullptr;
        }
        out.push_back(ev);
    }
    return out;
}

Report run_integrate(const IntegrateArgs& a, const FixtureSet& fx) {
    const State ic = parse_triple("--ic", a.ic);
    const Params alpha = parse_triple("--alpha", a.alpha);
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = a.tol;
    cfg.switch_radius = a.radius;
    cfg.hysteresis = a.hysteresis;
    cfg.hard_limit = std::max(cfg.hard_limit, 10 * a.radius);
    return timed([&] {
        Report r;
        r.command = "integrate";
        try {
            cfg.validate();
        } catch (const Error& e) {
            throw CLI::ValidationError("integrate", e.what());
        }
        try {
            const PhaseSpace space(fx);
            const auto tr = integrate_meromorphic(space, ic, a.t0, a.t1, alpha, cfg);
            std::ofstream csv(a.out);
            if (!csv)
                throw Error("cannot write '" + a.out + "'");
            write_csv(csv, space, tr);
            const json events = events_json(space, tr, fx);
            if (!a.events.empty()) {
                std::ofstream ej(a.events);
                if (!ej)
                    throw Error("cannot write '" + a.events + "'");
                ej << events.dump(2) << "\n";
            }
            r.add("integrate/completed", true,
                  std::to_string(tr.samples.size()) + " samples, " + std::to_string(tr.switches.size()) +
                      " chart switches, " + std::to_string(tr.pole_events.size()) + " pole events");
            const double rt = switch_roundtrip_error(space, tr);
            r.add("integrate/switch-roundtrip", rt <= 1e-12, "largest relative defect " + fmt17(rt));
            std::size_t unestimated = 0;
            for (const auto& e : tr.pole_events)
                if (!e.estimate)
                    ++unestimated;
            if (unestimated)
                r.warn("integrate/pole-estimates", std::to_string(unestimated) + " pole(s) too close to the span ends");
            const auto& end = tr.end();
            r.data = {{"csv", a.out},
                      {"samples", tr.samples.size()},
                      {"switches", tr.switches.size()},
                      {"rejected_steps", tr.rejected_steps},
                      {"end", {{"t", end.t},
                               {"chart", space.name(end.chart)},
                               {"coords", end.coords},
                               {"u0", json::array()}}},
                      {"pole_events", events}};
            for (double v : space.to_U0(end.chart, end.coords, end.t, alpha))
                r.data["end"]["u0"].push_back(std::isfinite(v) ? json(v) : json("inf"));
        } catch (const Error& e) {
            r.add("integrate/completed", false, e.what());
        }
        return r;
    });
}

struct TransformArgs {
    std::string from;
    std::string to;
    std::string point;
    std::string t = "t";
    std::string alpha;
};

// U0 or a fixture map whose source is (x, y, z).
std::optional<RationalMap> chart_map(const FixtureSet& fx, const std::string& name) {
    if (name == "U0")
        return std::nullopt;
    if (!fx.has_map(name))
        throw CLI::ValidationError("transform", "unknown chart '" + name + "'");
    const auto& m = fx.map(name);
    const auto& ctx = *fx.context;
    if (m.source().size() != 3 || ctx[m.source()[0]].name != "x" || ctx[m.source()[1]].name != "y" ||
        ctx[m.source()[2]].name != "z")
        throw CLI::ValidationError("transform", "'" + name + "' is not a chart on (x, y, z)");
    return m;
}

Report run_transform(const TransformArgs& a, const FixtureSet& fx) {
    const auto from = chart_map(fx, a.from);
    const auto to = chart_map(fx, a.to);
    const auto parts = split(a.point);
    if (parts.size() != 3)
        throw CLI::ValidationError("--point", "expected three comma-separated expressions");
    return timed([&] {
        Report r;
        r.command = "transform";
        try {
            const auto& ctx = fx.context;
            Bindings common;
            common.emplace(ctx->index_of("t"), parse_expression(a.t, ctx));
            if (!a.alpha.empty()) {
                const auto al = split(a.alpha);
                if (al.size() != 3)
                    throw CLI::ValidationError("--alpha", "expected three comma-separated expressions");
                for (std::size_t i = 0; i < 3; ++i)
                    common.emplace(ctx->index_of("a" + std::to_string(i + 1)), parse_expression(al[i], ctx));
            }
            std::vector<RationalExpr> local;
            for (const auto& p : parts)
                local.push_back(substitute(parse_expression(p, ctx), common));

            std::vector<RationalExpr> u0 = local;
            if (from) {
                Bindings b = common;
                for (std::size_t i = 0; i < 3; ++i)
                    b.insert_or_assign(from->target()[i], local[i]);
                u0.clear();
                for (const auto& e : from->inverse())
                    u0.push_back(substitute(e, b));
            }
            std::vector<RationalExpr> image = u0;
            if (to) {
                Bindings b = common;
                for (std::size_t i = 0; i < 3; ++i)
                    b.insert_or_assign(to->source()[i], u0[i]);
                image.clear();
                for (const auto& e : to->forward())
                    image.push_back(substitute(e, b));
            }
            json exact = json::array();
            json approx = json::array();
            for (const auto& e : image) {
                exact.push_back(to_string(e));
                if (e.is_constant())
                    approx.push_back(e.numerator().constant_term().get_d());
                else
                    approx.push_back(nullptr);
            }
            r.data = {{"from", a.from}, {"to", a.to}, {"image", exact}, {"numeric", approx}};
            r.add("transform/defined", true, a.from + " -> " + a.to + ": (" + exact[0].get<std::string>() + ", " +
                                                 exact[1].get<std::string>() + ", " + exact[2].get<std::string>() + ")");
        } catch (const CLI::Error&) {
            throw;
        } catch (const Error& e) {
            r.add("transform/defined", false, e.what());
        }
        return r;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification and numerical integration on an eight-chart phase space"};
    app.require_subcommand(1);

    std::string verify_target;
    auto* verify = app.add_subcommand("verify", "Run module verifications and print a JSON report");
    verify->add_option("target", verify_target, "atlas, singularities, symmetry, resolution or all")
        ->required()
        ->check(CLI::IsMember({"atlas", "singularities", "symmetry", "resolution", "all"}));

    std::string derive_target;
    auto* derive = app.add_subcommand("derive", "Print derived objects as a JSON report");
    derive->add_option("target", derive_target, "family, p3-index or reductions")
        ->required()
        ->check(CLI::IsMember({"family", "p3-index", "reductions"}));

    IntegrateArgs ia;
    auto* integrate = app.add_subcommand("integrate", "Integrate through poles; writes CSV and prints a summary");
    integrate->add_option("--ic", ia.ic, "initial x,y,z")->required();
    integrate->add_option("--alpha", ia.alpha, "parameters a1,a2,a3");
    integrate->add_option("--t0", ia.t0, "initial time");
    integrate->add_option("--t1", ia.t1, "final time")->required();
    integrate->add_option("--tol", ia.tol, "relative and absolute tolerance")->check(CLI::PositiveNumber);
    integrate->add_option("--radius", ia.radius, "chart switch radius")->check(CLI::PositiveNumber);
    integrate->add_option("--hysteresis", ia.hysteresis, "chart switch hysteresis in (0, 1)");
    integrate->add_option("--out", ia.out, "trajectory CSV path");
    integrate->add_option("--events", ia.events, "pole event JSON path");

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "Map a point exactly between two named charts");
    transform->add_option("--from", ta.from, "source chart (U0..U7, uvw, pqr, lmn)")->required();
    transform->add_option("--to", ta.to, "target chart")->required();
    transform->add_option("--point", ta.point, "comma-separated coordinates (exact expressions)")->required();
    transform->add_option("--t", ta.t, "time value (default: symbolic t)");
    transform->add_option("--alpha", ta.alpha, "parameter values a1,a2,a3 (default: symbolic)");

    try {
        app.parse(argc, argv);
        if (*integrate && ia.t1 == ia.t0)
            throw CLI::ValidationError("--t1", "must differ from --t0");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const FixtureSet fx = load_fixtures(default_fixture_dir());
        if (*verify)
            return emit(run_verify(verify_target, fx));
        if (*derive)
            return emit(run_derive(derive_target, fx));
        if (*integrate)
            return emit(run_integrate(ia, fx));
        return emit(run_transform(ta, fx));
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
