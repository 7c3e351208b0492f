#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>

#include "../fixtures_support.hpp"
#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/atlas/resolution.hpp"
#include "phase_atlas/error.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;

namespace {

// U4 with the shift a1 replaced by a1 - 1: still invertible, no longer holomorphic.
FixtureSet with_corrupted_U4() {
    FixtureSet set = fixtures();
    const RationalMap& u4 = set.map("U4");
    RationalMap bad("U4", u4.source(), u4.target(),
                    {fx("(x*z - a1 + 1)*z"), fx("((y + z - t)*z + 1 - a2 - a3)*z"), fx("1/z")},
                    {fx("(x4*z4 + a1 - 1)*z4"), fx("(y4*z4 - 1 + a2 + a3)*z4 + t - 1/z4"),
                     fx("1/z4")});
    set.maps.erase("U4");
    set.maps.emplace("U4", bad);
    return set;
}

const StepResult& result_named(const ReplayReport& rep, const std::string& name) {
    auto it = std::find_if(rep.results.begin(), rep.results.end(),
                           [&](const StepResult& r) { return r.result == name; });
    REQUIRE(it != rep.results.end());
    return *it;
}

} // namespace

TEST_CASE("every chart field is polynomial") {
    auto start = std::chrono::steady_clock::now();
    auto charts = builtin_atlas(fixtures());
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(charts.size() == 8);
    for (const auto& c : charts) {
        INFO(c.name);
        CHECK(certify_holomorphic(c).polynomial);
        CHECK(c.field.dimension() == 3);
    }
    CHECK(s < 10.0);
}

TEST_CASE("U4 field matches its hand computation") {
    auto charts = builtin_atlas(fixtures());
    const Chart& u4 = charts[4];
    REQUIRE(u4.name == "U4");
    // z4 = 1/z, so dz4/dt = -z4^2 dz/dt evaluated in chart coordinates.
    CHECK(equals(u4.field.rhs_for(fvar("z4")),
                 substitute(fx("-z4^2") * fixtures().field("eq1").rhs_for(fvar("z")),
                            fixtures().map("U4").inverse_bindings())));
}

TEST_CASE("check_atlas passes on the shipped fixtures") {
    auto checks = check_atlas(fixtures());
    REQUIRE(checks.size() == 7);
    for (const auto& c : checks) {
        INFO(c.chart);
        CHECK(c.ok());
        CHECK(c.problems.empty());
    }
}

TEST_CASE("a corrupted U4 is reported and only U4 fails") {
    FixtureSet bad = with_corrupted_U4();
    auto checks = check_atlas(bad);
    for (const auto& c : checks) {
        INFO(c.chart);
        if (c.chart == "U4") {
            CHECK(c.round_trip);
            CHECK_FALSE(c.polynomial);
            CHECK_FALSE(c.problems.empty());
        } else {
            CHECK(c.ok());
        }
    }
    CHECK_THROWS_AS(builtin_atlas(bad), VerificationError);
}

TEST_CASE("a map that is not a bijection fails the round trip") {
    FixtureSet set = fixtures();
    const RationalMap& u5 = set.map("U5");
    std::vector<RationalExpr> inv = u5.inverse();
    inv[0] = inv[0] + fx("1");
    RationalMap broken("U5", u5.source(), u5.target(), u5.forward(), inv);
    set.maps.erase("U5");
    set.maps.emplace("U5", broken);
    auto checks = check_atlas(set);
    CHECK_FALSE(checks[4].round_trip);
    CHECK_FALSE(checks[4].ok());
}

TEST_CASE("transitions between all chart pairs are consistent") {
    auto charts = builtin_atlas(fixtures());
    auto tr = check_transitions(charts);
    REQUIRE(tr.size() == 56);
    for (const auto& t : tr) {
        INFO(t.from << " -> " << t.to << ": " << t.detail);
        CHECK(t.consistent);
    }
}

TEST_CASE("a mislabelled chart field breaks its transitions") {
    auto charts = builtin_atlas(fixtures());
    std::vector<RationalExpr> rhs = charts[2].field.rhs();
    rhs[0] = rhs[0] + fx("1");
    charts[2].field = VectorField("U2", charts[2].field.coords(), rhs);
    auto tr = check_transitions(charts);
    for (const auto& t : tr) {
        INFO(t.from << " -> " << t.to);
        CHECK(t.consistent == (t.from != "U2" && t.to != "U2"));
    }
}

TEST_CASE("resolution replay reproduces every printed system") {
    auto rep = replay_resolution(fixtures());
    CHECK(rep.ok());
    for (const auto& r : rep.results) {
        INFO(r.step << " " << r.result << " " << r.error);
        CHECK(r.error.empty());
        if (r.golden) {
            CHECK(r.matched_golden);
            CHECK(r.mismatches.empty());
        }
        if (r.derived)
            CHECK(r.legal);
    }
    for (const char* name : {"F_P1", "F_P2", "F_P3", "F_P4", "F_P7", "F_412", "F_413", "F_431l", "F_432l"})
        CHECK(result_named(rep, name).matched_golden);
    REQUIRE(rep.terminals.size() == 7);
    for (const auto& t : rep.terminals) {
        INFO(t.field << " -> " << t.chart << " " << t.detail);
        CHECK(t.ok());
    }
    CHECK(rep.typeset_steps.size() == 11);
    CHECK(rep.derived_steps.size() == 7);
}

TEST_CASE("the printed 4.3.2 system differs from the computed one in a single coefficient") {
    auto rep = replay_resolution(fixtures());
    const auto& r = result_named(rep, "F_432l");
    REQUIRE(r.typeset_differences.size() == 1);
    CHECK(r.typeset_differences[0].find("difference (-a1*l3^2 + a2*l3^2)/(n3)") != std::string::npos);
    for (const auto& other : rep.results)
        if (other.result != "F_432l")
            CHECK(other.typeset_differences.empty());
}

TEST_CASE("replay survives a parameter specialization") {
    Bindings a2_zero{{fvar("a2"), fx("0")}};
    auto rep = replay_resolution(fixtures(), a2_zero);
    for (const auto& r : rep.results) {
        INFO(r.step << " " << r.result << " " << r.error);
        CHECK(r.error.empty());
        if (r.golden)
            CHECK(r.matched_golden);
    }
    for (const auto& t : rep.terminals)
        CHECK(t.ok());
    // With a2 = a1 the typeset coefficient coincides with the computed one.
    Bindings a2_is_a1{{fvar("a2"), fx("a1")}};
    auto same = replay_resolution(fixtures(), a2_is_a1);
    CHECK(result_named(same, "F_432l").typeset_differences.empty());
}

TEST_CASE("apply_resolution_step rejects a wrong golden") {
    const auto& set = fixtures();
    CHECK_THROWS_AS(apply_resolution_step(set.field("golden_412"), set.map("s413"), &set.field("golden_412")),
                    VerificationError);
    CHECK_NOTHROW(apply_resolution_step(set.field("golden_412"), set.map("s413"), &set.field("golden_413")));
}
