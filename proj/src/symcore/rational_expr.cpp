#include "phase_atlas/symcore/rational_expr.hpp"

#include <algorithm>
#include <unordered_map>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

RationalExpr::RationalExpr(ContextPtr ctx)
    : num_(ctx), den_(Polynomial::constant(ctx, 1)) {}

RationalExpr::RationalExpr(Polynomial numerator)
    : num_(std::move(numerator)), den_(Polynomial::constant(num_.context(), 1)) {}

RationalExpr::RationalExpr(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (!same_context(num_.context(), den_.context()))
        throw ContextMismatch("numerator and denominator contexts differ");
    if (den_.is_zero())
        throw DivisionByZero("division by the zero polynomial");
    normalize();
}

RationalExpr RationalExpr::constant(ContextPtr ctx, const Rational& c) {
    return RationalExpr(Polynomial::constant(std::move(ctx), c));
}

RationalExpr RationalExpr::variable(ContextPtr ctx, std::string_view name) {
    return RationalExpr(Polynomial::variable(std::move(ctx), name));
}

RationalExpr RationalExpr::from_factored(Polynomial numerator, std::vector<Factor> denominator) {
    RationalExpr r(numerator.context());
    if (numerator.is_zero())
        return r;
    Rational scale = 1;
    // Work list: each pass strips gcd(N, f) from one copy of f. Since
    // gcd(N, ab) = 1 iff gcd(N, a) = gcd(N, b) = 1, the result is coprime.
    std::vector<Factor> done;
    while (!denominator.empty()) {
        auto [f, e] = std::move(denominator.back());
        denominator.pop_back();
        if (e == 0)
            continue;
        if (f.is_zero())
            throw DivisionByZero("division by the zero polynomial");
        if (f.is_constant()) {
            for (unsigned k = 0; k < e; ++k)
                scale /= f.constant_term();
            continue;
        }
        Polynomial g = gcd(numerator, f);
        if (g.is_constant()) {
            done.emplace_back(std::move(f), e);
            continue;
        }
        numerator = numerator.divide_exact(g);
        Polynomial rest = f.divide_exact(g);
        if (e > 1)
            denominator.emplace_back(f, e - 1);
        denominator.emplace_back(std::move(rest), 1);
    }
    Polynomial den = Polynomial::constant(numerator.context(), 1);
    for (const auto& [f, e] : done)
        den *= f.pow(e);
    const Rational lc = den.leading_coefficient();
    scale /= lc;
    r.num_ = scale == 1 ? std::move(numerator) : numerator.scaled(scale);
    r.den_ = lc == 1 ? std::move(den) : den.scaled(1 / lc);
    return r;
}

void RationalExpr::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.context(), 1);
        return;
    }
    if (den_.is_constant()) {
        if (!den_.is_one()) {
            num_ = num_.scaled(1 / den_.leading_coefficient());
            den_ = Polynomial::constant(num_.context(), 1);
        }
        return;
    }
    Polynomial g = gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    const Rational lc = den_.leading_coefficient();
    if (lc != 1) {
        Rational inv = 1 / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

Rational RationalExpr::constant_value() const {
    if (!is_constant())
        throw Error("expression is not a constant");
    return num_.constant_term();
}

bool RationalExpr::is_polynomial_in(std::span<const VarIndex> vars) const {
    return std::none_of(vars.begin(), vars.end(), [&](VarIndex v) { return den_.involves(v); });
}

std::vector<VarIndex> RationalExpr::variables() const {
    auto a = num_.variables();
    auto b = den_.variables();
    std::vector<VarIndex> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

RationalExpr RationalExpr::differentiate(VarIndex v) const {
    if (den_.is_one())
        return RationalExpr(num_.derivative(v));
    Polynomial dn = num_.derivative(v);
    Polynomial dd = den_.derivative(v);
    if (dd.is_zero())
        return RationalExpr(dn, den_);
    // (n/d)' = (n' d - n d') / d^2; cancel one factor of d first via g = gcd(d, d').
    Polynomial g = gcd(den_, dd);
    Polynomial d_red = den_.divide_exact(g);
    Polynomial dd_red = dd.divide_exact(g);
    return RationalExpr(dn * d_red - num_ * dd_red, den_ * d_red);
}

RationalExpr RationalExpr::pow(unsigned exponent) const {
    RationalExpr r = *this;
    r.num_ = num_.pow(exponent);
    r.den_ = den_.pow(exponent);
    return r;
}

RationalExpr RationalExpr::lifted(const ContextPtr& target) const {
    RationalExpr r(target);
    r.num_ = num_.lifted(target);
    r.den_ = den_.lifted(target);
    // Re-normalize: the monomial order can change under re-indexing.
    if (!r.den_.is_one()) {
        const Rational lc = r.den_.leading_coefficient();
        if (lc != 1) {
            r.num_ = r.num_.scaled(1 / lc);
            r.den_ = r.den_.scaled(1 / lc);
        }
    }
    return r;
}

RationalExpr RationalExpr::operator-() const {
    RationalExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalExpr& RationalExpr::operator+=(const RationalExpr& rhs) {
    if (rhs.is_zero())
        return *this;
    if (den_ == rhs.den_) {
        num_ += rhs.num_;
        if (!den_.is_one())
            normalize();
        return *this;
    }
    Polynomial g = gcd(den_, rhs.den_);
    Polynomial a = den_.divide_exact(g);
    Polynomial b = rhs.den_.divide_exact(g);
    num_ = num_ * b + rhs.num_ * a;
    den_ = den_ * b;
    normalize();
    return *this;
}

RationalExpr& RationalExpr::operator-=(const RationalExpr& rhs) {
    return *this += -rhs;
}

RationalExpr& RationalExpr::operator*=(const RationalExpr& rhs) {
    if (is_zero())
        return *this;
    if (rhs.is_zero()) {
        *this = RationalExpr(context());
        return *this;
    }
    if (den_.is_one() && rhs.den_.is_one()) {
        num_ *= rhs.num_;
        return *this;
    }
    // Cross-cancel before multiplying to keep the final gcd small.
    Polynomial g1 = gcd(num_, rhs.den_);
    Polynomial g2 = gcd(rhs.num_, den_);
    Polynomial n1 = g1.is_one() ? num_ : num_.divide_exact(g1);
    Polynomial d2 = g1.is_one() ? rhs.den_ : rhs.den_.divide_exact(g1);
    Polynomial n2 = g2.is_one() ? rhs.num_ : rhs.num_.divide_exact(g2);
    Polynomial d1 = g2.is_one() ? den_ : den_.divide_exact(g2);
    num_ = n1 * n2;
    den_ = d1 * d2;
    const Rational lc = den_.leading_coefficient();
    if (lc != 1) {
        num_ = num_.scaled(1 / lc);
        den_ = den_.scaled(1 / lc);
    }
    return *this;
}

RationalExpr& RationalExpr::operator/=(const RationalExpr& rhs) {
    if (rhs.is_zero())
        throw DivisionByZero("division by a zero expression");
    RationalExpr inv(rhs.context());
    inv.num_ = rhs.den_;
    inv.den_ = rhs.num_;
    const Rational lc = inv.den_.leading_coefficient();
    if (lc != 1) {
        inv.num_ = inv.num_.scaled(1 / lc);
        inv.den_ = inv.den_.scaled(1 / lc);
    }
    return *this *= inv;
}

RationalExpr arith(ArithOp op, const RationalExpr& a, const RationalExpr& b) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
    case ArithOp::pow: {
        if (!b.is_constant())
            throw Error("exponent must be a constant");
        Rational e = b.constant_value();
        if (e.get_den() != 1 || e < 0 || !e.get_num().fits_uint_p())
            throw Error("exponent must be a nonnegative integer");
        return a.pow(static_cast<unsigned>(e.get_num().get_ui()));
    }
    }
    throw Error("unknown arithmetic operation");
}

RationalExpr arith(ArithOp op, const RationalExpr& a, long exponent) {
    if (op != ArithOp::pow)
        return arith(op, a, RationalExpr::constant(a.context(), Rational(exponent)));
    if (exponent < 0)
        throw Error("exponent must be a nonnegative integer");
    return a.pow(static_cast<unsigned>(exponent));
}

bool equals(const RationalExpr& a, const RationalExpr& b) {
    if (!same_context(a.context(), b.context()))
        throw ContextMismatch("comparison across contexts");
    // Cross-multiplication avoids a gcd on the difference.
    return a.numerator() * b.denominator() == b.numerator() * a.denominator();
}

namespace {

// Numerator and denominator of p(bindings) over a common denominator
// prod D_v^{deg_v p}, built without intermediate gcds.
struct Substituted {
    Polynomial numerator;
    // Exponent of each binding denominator in the common denominator.
    std::map<VarIndex, std::uint32_t> den_degree;
};

Substituted substitute_polynomial(const Polynomial& p, const Bindings& bindings) {
    const auto& ctx = p.context();
    std::map<VarIndex, std::uint32_t> max_deg;
    for (const auto& t : p.terms())
        for (const auto& [v, e] : t.monomial.factors())
            if (bindings.count(v)) {
                auto& d = max_deg[v];
                d = std::max(d, e);
            }

    // Power caches: num^k and den^k for k up to the max degree.
    struct Powers {
        std::vector<Polynomial> num;
        std::vector<Polynomial> den;
    };
    std::map<VarIndex, Powers> cache;
    for (const auto& [v, d] : max_deg) {
        const auto& b = bindings.at(v);
        Powers pw;
        pw.num.push_back(Polynomial::constant(ctx, 1));
        pw.den.push_back(Polynomial::constant(ctx, 1));
        for (std::uint32_t k = 1; k <= d; ++k) {
            pw.num.push_back(pw.num.back() * b.numerator());
            pw.den.push_back(b.denominator().is_one() ? pw.den.back()
                                                      : pw.den.back() * b.denominator());
        }
        cache.emplace(v, std::move(pw));
    }

    Polynomial result(ctx);
    for (const auto& t : p.terms()) {
        std::vector<Monomial::Factor> kept;
        Polynomial prod = Polynomial::constant(ctx, t.coeff);
        for (const auto& [v, e] : t.monomial.factors()) {
            auto it = cache.find(v);
            if (it == cache.end()) {
                kept.emplace_back(v, e);
                continue;
            }
            prod *= it->second.num[e];
        }
        for (const auto& [v, d] : max_deg) {
            auto e = t.monomial.exponent(v);
            if (e < d && !cache.at(v).den[d - e].is_one())
                prod *= cache.at(v).den[d - e];
        }
        if (!kept.empty())
            prod = prod.times_monomial(Monomial::from_factors(std::move(kept)));
        result += prod;
    }
    return {std::move(result), std::move(max_deg)};
}

void check_bindings(const ContextPtr& ctx, const Bindings& bindings) {
    for (const auto& [v, e] : bindings) {
        if (v >= ctx->size())
            throw ContextMismatch("binding for an unknown indeterminate");
        if (!same_context(ctx, e.context()))
            throw ContextMismatch("binding value lives in another context");
    }
}

} // namespace

RationalExpr substitute(const Polynomial& p, const Bindings& bindings) {
    if (bindings.empty())
        return RationalExpr(p);
    check_bindings(p.context(), bindings);
    auto [n, degrees] = substitute_polynomial(p, bindings);
    std::vector<RationalExpr::Factor> den;
    for (const auto& [v, d] : degrees)
        den.emplace_back(bindings.at(v).denominator(), d);
    return RationalExpr::from_factored(std::move(n), std::move(den));
}

RationalExpr substitute(const RationalExpr& e, const Bindings& bindings) {
    if (bindings.empty())
        return e;
    const auto& ctx = e.context();
    check_bindings(ctx, bindings);
    // Split the denominator as monomial * rest so that bound variables in the
    // monomial contribute their (small) binding numerators as separate factors.
    const Monomial mono = e.denominator().monomial_content();
    const Polynomial rest = e.denominator().divide_exact(Polynomial::constant(ctx, 1).times_monomial(mono));
    auto [nn, nd] = substitute_polynomial(e.numerator(), bindings);
    auto [rn, rd] = substitute_polynomial(rest, bindings);
    if (rn.is_zero())
        throw DivisionByZero("substitution makes a denominator vanish identically");

    // Net exponent of each binding denominator: positive means numerator.
    std::map<VarIndex, long> net;
    for (const auto& [v, d] : nd)
        net[v] -= d;
    for (const auto& [v, d] : rd)
        net[v] += d;
    std::vector<RationalExpr::Factor> den;
    std::vector<Monomial::Factor> kept;
    for (const auto& [v, k] : mono.factors()) {
        auto it = bindings.find(v);
        if (it == bindings.end()) {
            kept.emplace_back(v, k);
            continue;
        }
        if (it->second.numerator().is_zero())
            throw DivisionByZero("substitution makes a denominator vanish identically");
        den.emplace_back(it->second.numerator(), k);
        net[v] += k;
    }
    if (!kept.empty())
        den.emplace_back(Polynomial::constant(ctx, 1).times_monomial(Monomial::from_factors(std::move(kept))), 1);
    den.emplace_back(std::move(rn), 1);
    for (const auto& [v, k] : net) {
        const auto& d = bindings.at(v).denominator();
        if (k > 0)
            nn *= d.pow(static_cast<unsigned>(k));
        else if (k < 0)
            den.emplace_back(d, static_cast<unsigned>(-k));
    }
    return RationalExpr::from_factored(std::move(nn), std::move(den));
}

std::pair<Polynomial, Polynomial> substitute_cleared(const RationalExpr& e, const Bindings& bindings) {
    if (bindings.empty())
        return {e.numerator(), e.denominator()};
    const auto& ctx = e.context();
    check_bindings(ctx, bindings);
    auto [nn, nd] = substitute_polynomial(e.numerator(), bindings);
    auto [dn, dd] = substitute_polynomial(e.denominator(), bindings);
    if (dn.is_zero())
        throw DivisionByZero("substitution makes a denominator vanish identically");
    Polynomial num = std::move(nn);
    Polynomial den = std::move(dn);
    for (const auto& [v, d] : dd)
        num *= bindings.at(v).denominator().pow(d);
    for (const auto& [v, d] : nd)
        den *= bindings.at(v).denominator().pow(d);
    return {std::move(num), std::move(den)};
}

Bindings make_bindings(const ContextPtr& ctx,
                       std::initializer_list<std::pair<std::string_view, RationalExpr>> items) {
    Bindings b;
    for (const auto& [name, e] : items)
        b.emplace(ctx->index_of(name), e);
    return b;
}

} // namespace phase_atlas
