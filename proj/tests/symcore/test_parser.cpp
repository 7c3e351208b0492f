#include <catch2/catch_amalgamated.hpp>

#include "phase_atlas/error.hpp"
#include "support.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;

namespace {

Monomial mono(const ContextPtr& ctx, std::initializer_list<std::pair<const char*, unsigned>> f) {
    std::vector<Monomial::Factor> out;
    for (auto [name, e] : f)
        out.emplace_back(ctx->index_of(name), e);
    return Monomial::from_factors(std::move(out));
}

} // namespace

TEST_CASE("parse the x equation of the core system") {
    auto ctx = basic_context();
    auto e = expr(ctx, "x*(t - x - 2*z) + a1");
    REQUIRE(e.is_polynomial());
    std::vector<Term> expected{{mono(ctx, {{"x", 1}, {"t", 1}}), 1},
                               {mono(ctx, {{"x", 2}}), -1},
                               {mono(ctx, {{"x", 1}, {"z", 1}}), -2},
                               {mono(ctx, {{"a1", 1}}), 1}};
    CHECK(e.numerator() == Polynomial(ctx, expected));
    CHECK(e.numerator().size() == 4);
}

TEST_CASE("parse zero and products") {
    auto ctx = basic_context();
    CHECK(expr(ctx, "0").is_zero());
    auto e = expr(ctx, "(y*z + a2)*z");
    std::vector<Term> expected{{mono(ctx, {{"y", 1}, {"z", 2}}), 1},
                               {mono(ctx, {{"z", 1}, {"a2", 1}}), 1}};
    CHECK(e.numerator() == Polynomial(ctx, expected));
}

TEST_CASE("rational literals and unary minus") {
    auto ctx = basic_context();
    CHECK(expr(ctx, "3/2*x") == RationalExpr(Polynomial::variable(ctx, "x").scaled(Rational(3, 2))));
    CHECK(equals(expr(ctx, "-x^2"), -expr(ctx, "x*x")));
    CHECK(equals(expr(ctx, "(-x)^2"), expr(ctx, "x*x")));
    CHECK(equals(expr(ctx, "--x"), expr(ctx, "x")));
    CHECK(equals(expr(ctx, "2^3"), expr(ctx, "8")));
    CHECK(equals(expr(ctx, "x^0"), expr(ctx, "1")));
}

TEST_CASE("parse errors carry positions") {
    auto ctx = basic_context();
    try {
        parse_expression("x + * y", ctx);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    try {
        parse_expression("x + q", ctx, 7, 3);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(e.column() == 7);
        CHECK(std::string(e.what()).find("q") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expression("1/(x - x)", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("(x + 1", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("x^y", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("x y", ctx), ParseError);
    CHECK_THROWS_AS(parse_expression("", ctx), ParseError);
}

TEST_CASE("printing") {
    auto ctx = basic_context();
    CHECK(to_string(expr(ctx, "x*(t - x - 2*z) + a1")) == "-x^2 - 2*x*z + x*t + a1");
    CHECK(to_string(expr(ctx, "0")) == "0");
    CHECK(to_string(expr(ctx, "-1/(2*w)")) == "(-1/2)/(w)");
}
