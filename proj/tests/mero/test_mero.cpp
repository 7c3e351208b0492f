#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>

#include "../fixtures_support.hpp"
#include "phase_atlas/mero/mero.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const PhaseSpace& space() { return PhaseSpace::builtin(); }

const Params kAlpha{0.5, 1.0 / 3, 0.2};

Rhs chart_rhs(std::size_t chart, Params a) {
    return [chart, a](std::span<const double> y, double t, std::span<double> out) {
        const State v = space().rhs(chart, {y[0], y[1], y[2]}, t, a);
        std::copy(v.begin(), v.end(), out.begin());
    };
}

IntegratorConfig with_tol(double tol) {
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = tol;
    return cfg;
}

State u0_end(const Trajectory& tr) { return space().to_U0(tr.end().chart, tr.end().coords, tr.end().t, tr.params); }

const std::vector<std::array<Rational, 3>>& balances() {
    static const auto b = laurent_balances(fixtures().field("eq1"));
    return b;
}

std::array<Rational, 3> R3(int a, int b, int c) { return {Rational(a), Rational(b), Rational(c)}; }

} // namespace

TEST_CASE("a zero field leaves the state unchanged") {
    const Rhs zero = [](std::span<const double>, double, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    const std::vector<double> y{1.5, -2.0, 0.25};
    const auto r = step_embedded(zero, y, 0.0, 0.1);
    CHECK(r.state == y);
    CHECK(r.error == std::vector<double>{0, 0, 0});
}

TEST_CASE("dx/dt = x over one unit gives e") {
    const Rhs lin = [](std::span<const double> y, double, std::span<double> out) { out[0] = y[0]; };
    const auto y = integrate_adaptive(lin, {1.0}, 0.0, 1.0, 1e-10, 1e-10);
    CHECK_THAT(y[0], WithinAbs(std::exp(1.0), 1e-9));
    const auto back = integrate_adaptive(lin, y, 1.0, 0.0, 1e-10, 1e-10);
    CHECK_THAT(back[0], WithinAbs(1.0, 1e-9));

    // Dense output is fourth order: halving the step cuts the midpoint error ~32x.
    const auto r = step_embedded(lin, std::vector<double>{1.0}, 0.0, 0.1);
    const auto r2 = step_embedded(lin, std::vector<double>{1.0}, 0.0, 0.05);
    for (double s : {0.025, 0.05, 0.075})
        CHECK_THAT(r.dense.at(s)[0], WithinAbs(std::exp(s), 1e-8));
    const double e1 = std::abs(r.dense.at(0.05)[0] - std::exp(0.05));
    const double e2 = std::abs(r2.dense.at(0.025)[0] - std::exp(0.025));
    CHECK(e1 / e2 > 24);
    CHECK(r.dense.at(0.0)[0] == 1.0);
    CHECK(r.dense.at(0.1)[0] == r.state[0]);
}

TEST_CASE("non-finite stages throw") {
    const Rhs bad = [](std::span<const double> y, double, std::span<double> out) { out[0] = 1.0 / (y[0] - 1.0); };
    CHECK_THROWS_AS(step_embedded(bad, std::vector<double>{1.0}, 0.0, 0.1), IntegrationError);
}

TEST_CASE("observed order on a smooth segment is at least 4.5") {
    const double p = richardson_order(chart_rhs(0, kAlpha), {1, 1, 1}, 0.0, 0.25, 8);
    CHECK(p >= 4.5);
    CHECK(p <= 7.0);
    const Rhs lin = [](std::span<const double> y, double, std::span<double> out) { out[0] = y[0]; };
    CHECK_THAT(richardson_order(lin, {1.0}, 0.0, 1.0, 16), WithinAbs(5.0, 0.3));
}

TEST_CASE("the compiled phase space matches the symbolic charts") {
    REQUIRE(space().size() == 8);
    CHECK(space().name(0) == "U0");
    CHECK(space().name(7) == "U7");
    CHECK(space().coordinate_names(3) == std::vector<std::string>{"x3", "y3", "z3"});
    const State p{0.7, -1.3, 2.1};
    const auto f = space().rhs(0, p, 0.4, kAlpha);
    CHECK_THAT(f[0], WithinRel(0.7 * (0.4 - 0.7 - 4.2) + 0.5, 1e-14));
    CHECK_THAT(f[1], WithinRel(-1.3 * (-0.4 - 1.3 + 4.2) + 1.0 / 3, 1e-14));
    const auto u3 = space().transform(0, 3, p, 0.4, kAlpha);
    REQUIRE(u3);
    CHECK_THAT((*u3)[0], WithinRel(1 / 0.7, 1e-15));
    CHECK_FALSE(space().transform(0, 3, {0.0, 1.0, 1.0}, 0.0, kAlpha));
    CHECK(std::isinf(space().to_U0(3, {0.0, 1.0, 1.0}, 0.0, kAlpha)[0]));
    CHECK_THROWS_AS(space().index_of("U9"), Error);

    // Every transition inverts its reverse.
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            const auto img = space().transform(0, i, p, 0.4, kAlpha);
            REQUIRE(img);
            const auto there = space().transform(i, j, *img, 0.4, kAlpha);
            REQUIRE(there);
            const auto back = space().transform(j, i, *there, 0.4, kAlpha);
            REQUIRE(back);
            for (std::size_t k = 0; k < 3; ++k)
                CHECK_THAT((*back)[k], WithinAbs((*img)[k], 1e-12 * std::max(1.0, std::abs((*img)[k]))));
        }
}

TEST_CASE("Laurent balances of the base field") {
    CHECK(balances() == std::vector<std::array<Rational, 3>>{R3(-1, 0, 1), R3(0, -1, 0), R3(0, 0, 1), R3(0, 1, -1),
                                                             R3(1, -1, 0), R3(1, 0, 0), R3(3, 1, -1)});
    CHECK(matching_balance({0, -1.00001, 0}, balances(), 1e-4) == R3(0, -1, 0));
    CHECK_FALSE(matching_balance({0, -1.01, 0}, balances(), 1e-4));
}

TEST_CASE("pole crossing for ic (1,1,1)") {
    const auto start = std::chrono::steady_clock::now();
    const auto coarse = integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha, with_tol(1e-10));
    const auto fine = integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha, with_tol(1e-12));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 5.0);

    REQUIRE(coarse.pole_events.size() == 2);
    CHECK_THAT(coarse.pole_events[0].t_star, WithinAbs(0.703467075, 1e-8));
    CHECK_THAT(coarse.pole_events[1].t_star, WithinAbs(2.556496135, 1e-8));
    const std::array expected{R3(0, -1, 0), R3(0, 1, -1)};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& ev = coarse.pole_events[i];
        REQUIRE(ev.estimate);
        CHECK(matching_balance(ev.estimate->residue, balances(), 1e-4) == expected[i]);
        for (std::size_t k = 0; k < 3; ++k)
            if (ev.estimate->diverging[k])
                CHECK_THAT(ev.estimate->left[k], WithinRel(ev.estimate->right[k], 1e-4));
        CHECK(ev.estimate->diverging == std::array<bool, 3>{false, expected[i][1] != 0, expected[i][2] != 0});
    }
    CHECK(fine.pole_events.size() == 2);
    CHECK(endpoint_distance(space(), coarse, fine) <= 1e-7);
    CHECK_FALSE(coarse.switches.empty());
    CHECK(switch_roundtrip_error(space(), coarse) <= 1e-12);
    CHECK(switch_roundtrip_error(space(), fine) <= 1e-12);
}

TEST_CASE("samples are monotone and switches are exact transitions") {
    const auto tr = integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha);
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
        CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    CHECK(tr.samples.front().t == 0.0);
    CHECK(tr.end().t == 3.0);
    for (const auto& s : tr.switches) {
        const auto img = space().transform(s.from, s.to, s.before, s.t, tr.params);
        REQUIRE(img);
        CHECK(*img == s.after);
        CHECK(std::abs(*std::max_element(s.before.begin(), s.before.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); })) > 10.0);
    }
    // Pole samples carry an infinite U0 image only at the exact pole; nearby
    // the image is huge.
    const auto& ev = tr.pole_events.front();
    const auto it = std::find_if(tr.samples.begin(), tr.samples.end(), [&](const Sample& s) { return s.t == ev.t_star; });
    REQUIRE(it != tr.samples.end());
    CHECK(std::abs(space().to_U0(it->chart, it->coords, it->t, tr.params)[1]) > 1e6);
}

TEST_CASE("integration is reversible across poles") {
    const auto fwd = integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha);
    REQUIRE_FALSE(fwd.pole_events.empty());
    const auto back = integrate_in_chart(space(), fwd.end().chart, fwd.end().coords, 3, 0, kAlpha);
    for (std::size_t i = 1; i < back.samples.size(); ++i)
        CHECK(back.samples[i].t < back.samples[i - 1].t);
    CHECK(back.pole_events.size() == fwd.pole_events.size());
    const double budget = 10 * 1e-10 * static_cast<double>(fwd.samples.size() + back.samples.size());
    const auto u = u0_end(back);
    for (double v : u)
        CHECK_THAT(v, WithinAbs(1.0, budget));
}

TEST_CASE("an x pole crosses through U3 with residue one") {
    const auto tr = integrate_meromorphic(space(), {-5, 0, 0}, 0, 0.5, {0.1, 0.1, 0.1});
    REQUIRE(tr.pole_events.size() == 1);
    const auto& ev = tr.pole_events[0];
    CHECK(space().name(ev.chart) == "U3");
    REQUIRE(ev.estimate);
    CHECK(matching_balance(ev.estimate->residue, balances(), 1e-4) == R3(1, 0, 0));
    CHECK_THAT(ev.estimate->residue[0], WithinRel(1.0, 1e-4));
    // x3 = 1/x crosses zero with unit speed.
    const auto dx3 = space().rhs(3, tr.at(ev.t_star).coords, ev.t_star, tr.params)[0];
    CHECK_THAT(dx3, WithinAbs(1.0, 1e-6));
}

TEST_CASE("a z pole has residue one in z") {
    const auto tr = integrate_meromorphic(space(), {0, 0, -5}, 0, 0.5, {0.1, 0.1, 0.1});
    REQUIRE(tr.pole_events.size() == 1);
    const auto& ev = tr.pole_events[0];
    REQUIRE(ev.estimate);
    CHECK_THAT(ev.estimate->residue[2], WithinRel(1.0, 1e-4));
    CHECK(matching_balance(ev.estimate->residue, balances(), 1e-4));
}

TEST_CASE("simple pole estimation on a known function") {
    const auto p = estimate_simple_pole([](double t) { return 1.0 / (t - 2.0); }, [](double t) { return t - 2.0; },
                                        1.5, 2.7);
    CHECK_THAT(p.t_star, WithinAbs(2.0, 1e-12));
    CHECK_THAT(p.residue, WithinAbs(1.0, 1e-8));
    CHECK_THAT(p.left, WithinAbs(1.0, 1e-8));
    const auto q = estimate_simple_pole([](double t) { return -3.0 / (t - 2.0) + 7.0 + t; },
                                        [](double t) { return t - 2.0; }, 1.0, 3.0);
    CHECK_THAT(q.residue, WithinAbs(-3.0, 1e-7));
    CHECK_THROWS_AS(estimate_simple_pole([](double t) { return t; }, [](double t) { return t * t + 1; }, 0.0, 1.0),
                    Error);
}

TEST_CASE("the origin is an equilibrium when all parameters vanish") {
    const auto tr = integrate_meromorphic(space(), {0, 0, 0}, 0, 1, {0, 0, 0});
    for (const auto& s : tr.samples) {
        CHECK(s.chart == 0);
        CHECK(s.coords == State{0, 0, 0});
    }
    CHECK(tr.pole_events.empty());
}

TEST_CASE("x = 0 is invariant when a1 = 0") {
    const auto tr = integrate_meromorphic(space(), {0, 1, 1}, 0, 3, {0, 0.3, 0.4});
    CHECK_FALSE(tr.pole_events.empty());
    for (const auto& s : tr.samples) {
        const auto u = space().to_U0(s.chart, s.coords, s.t, tr.params);
        if (std::isfinite(u[0]))
            CHECK(std::abs(u[0]) <= 100 * 1e-10);
    }
}

TEST_CASE("Backlund maps commute with the flow") {
    const auto& s1 = fixtures().map("s1");
    const auto& s2 = fixtures().map("s2");
    CHECK(backlund_commutation_test(space(), s1, {1, 1, 1}, {0.5, 1.0 / 3, 0.0}, 0, 1) <= 1e-15);
    CHECK(backlund_commutation_test(space(), s1, {1, 1, 1}, kAlpha, 0, 0.3) < 100 * 1e-10);
    CHECK(backlund_commutation_test(space(), s2, {1, 1, 1}, kAlpha, 0, 0.3) < 100 * 1e-10);
    // s2 stays regular through both poles of this solution.
    CHECK(backlund_commutation_test(space(), s2, {1, 1, 1}, kAlpha, 0, 3) < 100 * 1e-10);
    // z changes sign near t = 0.8, which is s1's pole locus.
    CHECK_THROWS_WITH(backlund_commutation_test(space(), s1, {1, 1, 1}, kAlpha, 0, 1),
                      Catch::Matchers::ContainsSubstring("pole locus"));
}

TEST_CASE("robustness sweep has no atlas failures") {
    const auto rep = robustness_sweep(space(), 100, 20261019, 0, 2);
    CHECK(rep.runs == 100);
    CHECK(rep.atlas_incomplete == 0);
    CHECK(rep.completed == 100);
    CHECK(rep.failures.empty());
    CHECK(rep.pole_events > 0);
}

TEST_CASE("a switching rule that cannot be met reports atlas incompleteness") {
    IntegratorConfig cfg;
    cfg.hysteresis = 1e-3;
    cfg.hard_limit = 11;
    CHECK_THROWS_AS(integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha, cfg), AtlasIncompleteError);
}

TEST_CASE("invalid configurations and inputs are rejected") {
    IntegratorConfig cfg;
    cfg.hysteresis = 1.5;
    CHECK_THROWS_AS(integrate_meromorphic(space(), {1, 1, 1}, 0, 1, kAlpha, cfg), Error);
    cfg = {};
    cfg.rel_tol = 0;
    CHECK_THROWS_AS(integrate_meromorphic(space(), {1, 1, 1}, 0, 1, kAlpha, cfg), Error);
    CHECK_THROWS_AS(integrate_meromorphic(space(), {NAN, 1, 1}, 0, 1, kAlpha), Error);
    cfg = {};
    cfg.min_step = 1e-2;
    cfg.max_step = 1e-2;
    cfg.initial_step = 1e-2;
    cfg.rel_tol = cfg.abs_tol = 1e-16;
    CHECK_THROWS_AS(integrate_meromorphic(space(), {1, 1, 1}, 0, 3, kAlpha, cfg), IntegrationError);
    const auto still = integrate_meromorphic(space(), {1, 1, 1}, 2, 2, kAlpha);
    CHECK(still.samples.size() == 1);
}
