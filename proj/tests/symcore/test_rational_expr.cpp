#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/compiled.hpp"
#include "support.hpp"

using namespace phase_atlas;
using namespace phase_atlas::testing;

TEST_CASE("arith") {
    auto ctx = basic_context();
    auto x = expr(ctx, "x"), w = expr(ctx, "w");
    CHECK(arith(ArithOp::add, x, -x).is_zero());
    CHECK(arith(ArithOp::mul, expr(ctx, "1/w"), w) == expr(ctx, "1"));
    auto q = arith(ArithOp::div, expr(ctx, "y*z^2 + a2*z"), expr(ctx, "z"));
    CHECK(q == expr(ctx, "y*z + a2"));
    CHECK(q.is_polynomial());
    CHECK(arith(ArithOp::pow, expr(ctx, "x + 1/w"), 2) == expr(ctx, "(x*w + 1)^2/w^2"));
    CHECK_THROWS_AS(arith(ArithOp::div, x, expr(ctx, "0")), DivisionByZero);
    CHECK_THROWS_AS(arith(ArithOp::pow, x, -1), Error);
}

TEST_CASE("canonical denominator is monic") {
    auto ctx = basic_context();
    auto e = expr(ctx, "x/(-2*w + 4)");
    CHECK(e.denominator() == poly(ctx, "w - 2"));
    CHECK(e.numerator() == poly(ctx, "-1/2*x"));
}

TEST_CASE("differentiate") {
    auto ctx = basic_context();
    VarIndex x = ctx->index_of("x"), z = ctx->index_of("z");
    CHECK(expr(ctx, "x^2 + 2*x*z").differentiate(x) == expr(ctx, "2*x + 2*z"));
    CHECK(expr(ctx, "1/z").differentiate(z) == expr(ctx, "-1/z^2"));
    CHECK(expr(ctx, "y*z^2 + a2*z").differentiate(z) == expr(ctx, "2*y*z + a2"));
    CHECK(expr(ctx, "x/(x + z)").differentiate(x) == expr(ctx, "z/(x + z)^2"));
}

TEST_CASE("differentiate agrees with central differences") {
    auto ctx = basic_context();
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
    auto e = expr(ctx, "(y*z^2 + a2*z)/(x^2 + 3) + x*y/(z + 7) - t*x^3");
    for (VarIndex v : {ctx->index_of("x"), ctx->index_of("y"), ctx->index_of("z")}) {
        auto d = e.differentiate(v);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> p(ctx->size());
            for (auto& c : p)
                c = static_cast<double>(num(rng)) / den(rng) / 4.0;
            const double h = 1e-5 * std::max(1.0, std::abs(p[v]));
            auto hi = p, lo = p;
            hi[v] += h;
            lo[v] -= h;
            double fd = (evaluate(e, hi) - evaluate(e, lo)) / (2 * h);
            double exact = evaluate(d, p);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("substitute") {
    auto ctx = basic_context();
    auto b = make_bindings(ctx, {{"z", expr(ctx, "1/z1")}});
    CHECK(substitute(expr(ctx, "1/z"), b) == expr(ctx, "z1"));
    auto e = expr(ctx, "x*y/(z + 1)");
    CHECK(substitute(e, {}) == e);
    auto inv = make_bindings(ctx, {{"x", expr(ctx, "1/x1 - 1/z1")}, {"z", expr(ctx, "1/z1")}});
    CHECK(substitute(expr(ctx, "x + z"), inv) == expr(ctx, "1/x1"));
    CHECK_THROWS_AS(substitute(expr(ctx, "1/z"), make_bindings(ctx, {{"z", expr(ctx, "0")}})),
                    DivisionByZero);
    // simultaneous, not sequential
    auto swap = make_bindings(ctx, {{"x", expr(ctx, "y")}, {"y", expr(ctx, "x")}});
    CHECK(substitute(expr(ctx, "x - 2*y"), swap) == expr(ctx, "y - 2*x"));
}

TEST_CASE("is_polynomial_in and equals") {
    auto ctx = basic_context();
    std::vector<VarIndex> w{ctx->index_of("w")}, x{ctx->index_of("x")};
    CHECK_FALSE(expr(ctx, "2*v/w").is_polynomial_in(w));
    CHECK(expr(ctx, "2*v/w").is_polynomial_in(x));
    CHECK(expr(ctx, "x + t").is_polynomial_in(x));
    CHECK(equals(expr(ctx, "(x^2 - 1)/(x - 1)"), expr(ctx, "x + 1")));
    CHECK_FALSE(equals(expr(ctx, "1/w"), expr(ctx, "1/w^2")));
}

TEST_CASE("compiled evaluation") {
    auto ctx = basic_context();
    std::vector<std::string> slots{"t", "x", "y", "z", "a1"};
    CompiledExpr f(expr(ctx, "x*(t - x - 2*z) + a1 + y/(z + 1)"), slots);
    std::vector<double> in{0.5, 2.0, 3.0, 1.0, 0.25};
    CHECK(f(in) == Catch::Approx(2.0 * (0.5 - 2.0 - 2.0) + 0.25 + 1.5));
    CHECK_THROWS_AS(CompiledExpr(expr(ctx, "w"), slots), Error);
}
