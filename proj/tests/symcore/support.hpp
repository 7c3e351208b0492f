#pragma once

#include <random>
#include <string>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas::testing {

inline ContextPtr basic_context() {
    using K = IndeterminateKind;
    return Context::make({{"x", K::state}, {"y", K::state}, {"z", K::state},
                          {"u", K::state}, {"v", K::state}, {"w", K::state},
                          {"x1", K::state}, {"z1", K::state}, {"t", K::time},
                          {"a1", K::parameter}, {"a2", K::parameter}, {"a3", K::parameter},
                          {"A1", K::coefficient}, {"A5", K::coefficient}});
}

inline RationalExpr expr(const ContextPtr& ctx, std::string_view text) {
    return parse_expression(text, ctx);
}

inline Polynomial poly(const ContextPtr& ctx, std::string_view text) {
    auto e = parse_expression(text, ctx);
    if (!e.is_polynomial())
        throw Error("not a polynomial: " + std::string(text));
    return e.numerator();
}

/// Small random polynomial over the first `nvars` indeterminates.
inline Polynomial random_polynomial(const ContextPtr& ctx, std::mt19937& rng, unsigned nvars,
                                    unsigned max_terms = 4, unsigned max_deg = 2) {
    std::uniform_int_distribution<int> nterms(1, static_cast<int>(max_terms));
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<unsigned> var(0, nvars - 1);
    std::uniform_int_distribution<unsigned> deg(0, max_deg);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<Monomial::Factor> f;
        unsigned nf = deg(rng);
        for (unsigned k = 0; k < nf; ++k)
            f.emplace_back(var(rng), 1);
        terms.push_back({Monomial::from_factors(std::move(f)), Rational(coeff(rng), den(rng))});
    }
    return Polynomial(ctx, std::move(terms));
}

inline RationalExpr random_rational(const ContextPtr& ctx, std::mt19937& rng, unsigned nvars) {
    Polynomial n = random_polynomial(ctx, rng, nvars);
    Polynomial d = random_polynomial(ctx, rng, nvars, 2, 1);
    if (d.is_zero())
        d = Polynomial::constant(ctx, 1);
    return RationalExpr(n, d);
}

/// Float evaluation straight from the term lists, independent of CompiledExpr.
inline double evaluate(const Polynomial& p, const std::vector<double>& point) {
    double s = 0;
    for (const auto& t : p.terms()) {
        double term = t.coeff.get_d();
        for (const auto& [v, e] : t.monomial.factors())
            for (unsigned k = 0; k < e; ++k)
                term *= point.at(v);
        s += term;
    }
    return s;
}

inline double evaluate(const RationalExpr& e, const std::vector<double>& point) {
    return evaluate(e.numerator(), point) / evaluate(e.denominator(), point);
}

} // namespace phase_atlas::testing
