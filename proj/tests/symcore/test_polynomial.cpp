#include <catch2/catch_amalgamated.hpp>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/linear_algebra.hpp"
#include "support.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;

TEST_CASE("graded lex order puts earlier variables first") {
    auto ctx = basic_context();
    auto p = poly(ctx, "z + x + y^2 + 1");
    REQUIRE(p.size() == 4);
    CHECK(to_string(p) == "y^2 + x + z + 1");
}

TEST_CASE("coefficient extraction") {
    auto ctx = basic_context();
    VarIndex x = ctx->index_of("x"), y = ctx->index_of("y"), z = ctx->index_of("z");
    std::vector<VarIndex> xyz{x, y, z};
    auto f1 = poly(ctx, "x*(t - x - 2*z) + a1");
    CHECK(f1.coefficient_of(Monomial::variable(x, 2), xyz) == Polynomial::constant(ctx, -1));
    CHECK(f1.coefficient_of(Monomial::variable(x), xyz) == poly(ctx, "t"));
    CHECK(f1.coefficient_of(Monomial(), xyz) == poly(ctx, "a1"));
    CHECK(f1.degree_in(x) == 2);
    CHECK(Polynomial(ctx).coefficient_of(Monomial::variable(y), xyz).is_zero());

    // f2 of the two-parameter decoupling family: the xy coefficient is A5 - 2*A1.
    auto f2 = poly(ctx, "(A5 - 2*A1)*x*y + A1*y^2 + 2*A1*y*z - t*y");
    CHECK(f2.coefficient_of(Monomial::from_factors({{x, 1}, {y, 1}}), xyz) == poly(ctx, "A5 - 2*A1"));
}

TEST_CASE("coefficients_in gives a dense list") {
    auto ctx = basic_context();
    VarIndex x = ctx->index_of("x");
    auto c = poly(ctx, "x*(t - x - 2*z) + a1").coefficients_in(x);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == poly(ctx, "a1"));
    CHECK(c[1] == poly(ctx, "t - 2*z"));
    CHECK(c[2] == poly(ctx, "-1"));
}

TEST_CASE("exact division") {
    auto ctx = basic_context();
    auto n = poly(ctx, "y*z^2 + a2*z");
    CHECK(n.divide_exact(poly(ctx, "z")) == poly(ctx, "y*z + a2"));
    CHECK(poly(ctx, "x^2 - y^2").divide_exact(poly(ctx, "x + y")) == poly(ctx, "x - y"));
    CHECK_FALSE(poly(ctx, "x^2 + 1").exact_divide(poly(ctx, "x + 1")).has_value());
    CHECK_THROWS_AS(poly(ctx, "x").divide_exact(Polynomial(ctx)), DivisionByZero);
}

TEST_CASE("gcd") {
    auto ctx = basic_context();
    CHECK(gcd(poly(ctx, "(x + 1)*(y + 2)"), poly(ctx, "(x + 1)*(y - 3)")) == poly(ctx, "x + 1"));
    CHECK(gcd(poly(ctx, "2*x*y^2*z"), poly(ctx, "4*x^2*y")) == poly(ctx, "x*y"));
    CHECK(gcd(poly(ctx, "x^2 - 1"), poly(ctx, "x^2 + 2*x + 1")) == poly(ctx, "x + 1"));
    CHECK(gcd(poly(ctx, "x + y"), poly(ctx, "x - y")).is_one());
    CHECK(gcd(Polynomial(ctx), poly(ctx, "3*x + 3")) == poly(ctx, "x + 1"));
    CHECK(gcd(Polynomial(ctx), Polynomial(ctx)).is_zero());
    auto g = poly(ctx, "x*z*t - a1*y + 1");
    CHECK(gcd(g * poly(ctx, "x - t*a2"), g * poly(ctx, "z^2 + a3")) == g.monic());
}

TEST_CASE("resultant") {
    auto ctx = basic_context();
    VarIndex x = ctx->index_of("x");
    // Sylvester determinant of [[1, -p], [1, -q]] is p - q.
    CHECK(resultant(poly(ctx, "x - y"), poly(ctx, "x - z"), x) == poly(ctx, "y - z"));
    // Common root x = 1 when y = 1.
    auto r = resultant(poly(ctx, "x^2 - y"), poly(ctx, "x - 1"), x);
    CHECK((r == poly(ctx, "1 - y") || r == poly(ctx, "y - 1")));
    CHECK(resultant(poly(ctx, "x^2 - 2"), poly(ctx, "x^2 - 3"), x) == poly(ctx, "1"));
}

TEST_CASE("rational linear algebra") {
    RationalMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, -1}};
    CHECK(rank(m, 3) == 2);
    auto ns = nullspace(m, 3);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0] == RationalVector{1, -2, 1});
    CHECK(nullspace(RationalMatrix{}, 2).size() == 2);
}
