#include <catch2/catch_amalgamated.hpp>

#include "../fixtures_support.hpp"
#include "phase_atlas/error.hpp"
#include "phase_atlas/symmetry/symmetry.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;

namespace {

std::vector<RationalMap> backlund_maps() { return {fixtures().map("s1"), fixtures().map("s2")}; }

const VectorField& eq1() { return fixtures().field("eq1"); }

const InvariantFamily& family8() {
    static const InvariantFamily fam = derive_invariant_family(eq1(), backlund_maps());
    return fam;
}

VectorField field_xyz(std::string_view dx, std::string_view dy, std::string_view dz) {
    return VectorField("test", {fvar("x"), fvar("y"), fvar("z")}, {fx(dx), fx(dy), fx(dz)});
}

Bindings letters(std::initializer_list<std::pair<const char*, const char*>> items) {
    Bindings b;
    for (const auto& [name, value] : items)
        b.emplace(fvar(name), fx(value));
    return b;
}

// The base field as a member of the printed family.
Bindings eq1_letters() {
    return letters({{"A1", "-1"}, {"C3", "-1"}, {"A5", "-2"}, {"A6", "0"}, {"A7", "1"}, {"B8", "-1"},
                    {"A10", "0"}, {"B2", "1"}});
}

} // namespace

TEST_CASE("s1 acts as printed") {
    const auto& s1 = fixtures().map("s1");
    auto img = apply_backlund(s1, {fx("x"), fx("y"), fx("z")});
    CHECK(img.state[0] == fx("x"));
    CHECK(img.state[1] == fx("y - a3/z"));
    CHECK(img.state[2] == fx("z"));
    CHECK(img.parameters.at(fvar("a1")) == fx("a1"));
    CHECK(img.parameters.at(fvar("a2")) == fx("a2 + a3"));
    CHECK(img.parameters.at(fvar("a3")) == fx("-a3"));

    auto trivial = apply_backlund(s1, {fx("x"), fx("y"), fx("z")}, letters({{"a3", "0"}}));
    CHECK(trivial.state == std::vector<RationalExpr>{fx("x"), fx("y"), fx("z")});
}

TEST_CASE("Backlund maps are involutions on states and parameters") {
    Catch::Generators::RandomIntegerGenerator<int> gen(-9, 9, 7);
    auto rnd = [&] {
        gen.next();
        int n = gen.get();
        gen.next();
        int d = std::abs(gen.get()) + 1;
        Rational q(n, d);
        q.canonicalize();
        return q;
    };
    for (const auto& s : backlund_maps())
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<RationalExpr> state;
            Bindings params;
            for (const char* c : {"x", "y", "z"}) {
                Rational v = rnd();
                if (v == 0)
                    v = 1;
                state.push_back(RationalExpr::constant(fixtures().context, v));
            }
            for (const char* a : {"a1", "a2", "a3"})
                params.emplace(fvar(a), RationalExpr::constant(fixtures().context, rnd()));
            BacklundImage once;
            try {
                once = apply_backlund(s, state, params);
            } catch (const DivisionByZero&) {
                continue;
            }
            BacklundImage twice;
            try {
                twice = apply_backlund(s, once.state, once.parameters);
            } catch (const DivisionByZero&) {
                continue;
            }
            INFO(s.name() << " trial " << trial);
            CHECK(twice.state == state);
            for (const auto& [v, value] : params)
                CHECK(twice.parameters.at(v) == value);
        }
}

TEST_CASE("evaluating a Backlund map at its pole throws") {
    auto a3 = letters({{"a3", "1"}});
    CHECK_THROWS_AS(apply_backlund(fixtures().map("s1"), {fx("1"), fx("2"), fx("0")}, a3), DivisionByZero);
    auto a2 = letters({{"a2", "1"}});
    CHECK_THROWS_AS(apply_backlund(fixtures().map("s2"), {fx("1"), fx("0"), fx("3")}, a2), DivisionByZero);
    CHECK_THROWS_AS(apply_backlund(fixtures().map("s1"), {fx("1")}), Error);
}

TEST_CASE("the base field is invariant under s1 and s2") {
    for (const auto& s : backlund_maps()) {
        INFO(s.name());
        for (const auto& r : invariance_residual(eq1(), s))
            CHECK(r.is_zero());
        CHECK(is_invariant(eq1(), s));
    }
}

TEST_CASE("removing a parameter breaks invariance") {
    auto broken = field_xyz("x*(t - x - 2*z) + a1", "y*(-t + y + 2*z)", "z*(t - 2*y - z) + a3");
    auto r = invariance_residual(broken, fixtures().map("s1"));
    CHECK_FALSE(std::all_of(r.begin(), r.end(), [](const RationalExpr& e) { return e.is_zero(); }));
    CHECK_FALSE(is_invariant(broken, fixtures().map("s2")));
    CHECK_THROWS_AS(invariance_residual(fixtures().field("piv"), fixtures().map("s1")), Error);
}

TEST_CASE("the invariant family has dimension 8 and contains the base field") {
    const auto& fam = family8();
    CHECK(fam.dimension() == 8);
    CHECK(fam.unknowns.size() == 36);
    CHECK(fam.contains(eq1()));
    CHECK_FALSE(fam.contains(field_xyz("x*(t - x - 2*z) + a1", "y*(-t + y + 2*z)", "z*(t - 2*y - z) + a3")));
    CHECK_THROWS_AS(fam.coefficients_of(field_xyz("x^3", "y", "z")), Error);
    for (const auto& s : backlund_maps())
        CHECK(is_invariant(fam.family, s));
    auto affine = derive_invariant_family(eq1(), backlund_maps(), true);
    CHECK(affine.dimension() == 9);
    CHECK(affine.unknowns.size() == 39);
}

TEST_CASE("every basis vector is an invariant field") {
    const auto& fam = family8();
    for (std::size_t b = 0; b < fam.dimension(); ++b) {
        std::vector<RationalExpr> rhs(3, RationalExpr(fam.context));
        for (std::size_t col = 0; col < fam.columns.size(); ++col)
            if (fam.basis[b][col] != 0)
                rhs[col / 13] += RationalExpr(Polynomial::monomial(fam.context, fam.column_monomials[col], fam.basis[b][col]));
        VectorField member("basis", fam.ansatz.coords(), rhs);
        INFO("basis " << b);
        for (const auto& s : backlund_maps())
            CHECK(is_invariant(member, s));
    }
}

TEST_CASE("the printed family agrees on quadratic and t-linear terms") {
    auto cmp = compare_with_printed(family8(), fixtures().field("family2"), backlund_maps());
    CHECK(cmp.quadratic_span_matches);
    CHECK_FALSE(cmp.printed_invariant);
    REQUIRE(cmp.derived_in_printed_letters);
    const auto& derived = *cmp.derived_in_printed_letters;
    const auto& printed = fixtures().field("family2");
    const std::vector<VarIndex> dyn{fvar("x"), fvar("y"), fvar("z"), fvar("t")};
    for (std::size_t i = 0; i < 3; ++i) {
        // Strip the terms free of x, y, z, t and compare the rest.
        auto strip = [&](const Polynomial& p) {
            std::vector<Term> kept;
            for (const auto& t : p.terms())
                if (std::any_of(dyn.begin(), dyn.end(), [&](VarIndex v) { return t.monomial.exponent(v) > 0; }))
                    kept.push_back(t);
            return Polynomial(p.context(), kept);
        };
        CHECK(strip(derived.rhs()[i].numerator()) == strip(printed.rhs()[i].numerator()));
    }
    CHECK(derived.rhs()[1].numerator().coefficient_of(Monomial::from_factors({{fvar("x"), 1}, {fvar("y"), 1}}),
                                                       std::vector<VarIndex>{fvar("x"), fvar("y"), fvar("z")}) ==
          fpoly("A5 - 2*A1"));
    for (const auto& s : backlund_maps())
        CHECK(is_invariant(derived, s));
}

TEST_CASE("constant-term discrepancies with the printed family are reported") {
    auto cmp = compare_with_printed(family8(), fixtures().field("family2"), backlund_maps());
    REQUIRE(cmp.constant_discrepancies.size() == 3);
    CHECK(cmp.constant_discrepancies[1] ==
          "dy/dt constant: printed -2*a2*A1 + a2*C3 + a2*A5, derived 2*a2*A1 - a2*C3 - a2*A5");
    CHECK(cmp.constant_discrepancies[2] == "dz/dt constant: printed a2*B2 - a3*B2, derived a3*B2");
    CHECK(cmp.free_constant_directions == std::vector<std::string>{"dx/dt: 3*a1 + 2*a2 + a3"});

    // The derived constants give back the base field; the printed ones do not.
    auto derived = cmp.derived_in_printed_letters->specialized(eq1_letters());
    CHECK(compare_fields(derived, eq1()).empty());
    auto printed = fixtures().field("family2").specialized(eq1_letters());
    auto diffs = compare_fields(printed, eq1());
    CHECK(diffs.size() == 3);
}

TEST_CASE("decoupling needs A5 = 2 A1") {
    auto dc = decoupling_check(fixtures().field("family2"), fvar("x"));
    REQUIRE(dc.conditions.size() == 1);
    CHECK(dc.conditions[0] == fpoly("2*A1 - A5"));
    REQUIRE(dc.solution.size() == 1);
    CHECK(dc.solution.at(fvar("A5")) == fx("2*A1"));
    REQUIRE(dc.subsystem);
    CHECK(dc.subsystem->coords() == std::vector<VarIndex>{fvar("y"), fvar("z")});
    for (const auto& r : dc.subsystem->rhs())
        CHECK_FALSE(r.involves(fvar("x")));

    CHECK(decoupling_check(eq1(), fvar("x")).holds_identically());

    auto off = fixtures().field("family2").specialized(letters({{"A5", "2*A1 + 1"}}));
    CHECK(off.rhs_for(fvar("y")).involves(fvar("x")));
    auto dc_off = decoupling_check(off, fvar("x"));
    CHECK(dc_off.conditions == std::vector<Polynomial>{fpoly("1")});
    CHECK_FALSE(dc_off.subsystem);
}

TEST_CASE("the P3 index of the decoupled family is (-A1, -A1, -A1)") {
    auto decoupled = fixtures().field("family2").specialized(letters({{"A5", "2*A1"}}));
    auto idx = p3_index_family(fixtures(), decoupled);
    for (const auto& e : idx.tuple) {
        CHECK(e == fx("-A1"));
        // Homogeneous of degree one in the coefficients.
        REQUIRE(e.is_polynomial());
        for (const auto& t : e.numerator().terms()) {
            CHECK(t.monomial.degree() == 1);
            for (const auto& [v, k] : t.monomial.factors())
                CHECK((*fixtures().context)[v].kind == IndeterminateKind::coefficient);
        }
    }
    auto at_eq1 = p3_index_family(fixtures(), decoupled.specialized(letters({{"A1", "-1"}})));
    CHECK(at_eq1.constant_tuple() == std::array<Rational, 3>{1, 1, 1});
    auto degenerate = p3_index_family(fixtures(), decoupled.specialized(letters({{"A1", "0"}})));
    CHECK(degenerate.constant_tuple() == std::array<Rational, 3>{0, 0, 0});
    CHECK_FALSE(degenerate.warnings.empty());
    CHECK(p3_index_family(fixtures(), eq1()).constant_tuple() == std::array<Rational, 3>{1, 1, 1});
}

TEST_CASE("P3 can fail to be accessible") {
    auto f = field_xyz("x^2", "x*y + x^2", "x*z");
    CHECK_THROWS_AS(p3_index_family(fixtures(), f), Error);
}

TEST_CASE("Noumi-Yamada reduction matches the base field under a computed renaming") {
    auto rep = ny_reduction_check(fixtures());
    CHECK(rep.generic_residual == fx("b1"));
    CHECK(rep.invariant);
    CHECK(rep.matched);
    CHECK(rep.mismatches.empty());
    using P = std::pair<std::string, std::string>;
    CHECK(rep.renaming == std::vector<P>{{"y", "x"}, {"z", "y"}, {"w", "z"}, {"b2", "a1"}, {"b3", "a2"}, {"b4", "a3"}});
}

TEST_CASE("a sign error in the coupled system is itemized") {
    FixtureSet set = fixtures();
    const auto& c4 = set.field("coupled4");
    std::vector<RationalExpr> rhs = c4.rhs();
    rhs[2] = fx("z^2 + 2*z*w + 2*x*y - t*z + b1 - b3");
    set.fields.erase("coupled4");
    set.fields.emplace("coupled4", VectorField("coupled4", c4.coords(), rhs));
    auto rep = ny_reduction_check(set);
    CHECK_FALSE(rep.matched);
    CHECK_FALSE(rep.mismatches.empty());
}

TEST_CASE("Painleve IV reduction on x = 0") {
    auto rep = piv_reduction_check(fixtures());
    CHECK(rep.generic_residual == fx("a1"));
    CHECK(rep.invariant);
    CHECK(rep.matched);
    REQUIRE(rep.reduced);
    CHECK(rep.reduced->rhs_for(fvar("y")) == fx("y*(-t + y + 2*z) + a2"));
    CHECK(rep.reduced->rhs_for(fvar("z")) == fx("z*(t - 2*y - z) + a3"));
    CHECK(rep.riccati);
    REQUIRE(rep.riccati_coefficients.size() == 3);
    CHECK(rep.riccati_coefficients[0] == fx("a1"));
    CHECK(rep.riccati_coefficients[1] == fx("t - 2*z"));
    CHECK(rep.riccati_coefficients[2] == fx("-1"));
}
