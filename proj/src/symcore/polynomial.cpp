#include "phase_atlas/symcore/polynomial.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

namespace {

void sort_and_merge(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return compare_grlex(a.monomial, b.monomial) > 0;
    });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().monomial == t.monomial)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return sgn(t.coeff) == 0; });
    terms = std::move(merged);
}

} // namespace

std::string to_string(const Rational& q) {
    return q.get_str();
}

Polynomial::Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

Polynomial::Polynomial(ContextPtr ctx, std::vector<Term> terms)
    : ctx_(std::move(ctx)), terms_(std::move(terms)) {
    for (auto& t : terms_)
        t.coeff.canonicalize();
    sort_and_merge(terms_);
}

Polynomial Polynomial::constant(ContextPtr ctx, const Rational& c) {
    Polynomial p(std::move(ctx));
    if (sgn(c) != 0)
        p.terms_.push_back({Monomial(), c});
    return p;
}

Polynomial Polynomial::variable(ContextPtr ctx, VarIndex v) {
    if (v >= ctx->size())
        throw ContextMismatch("variable index out of range");
    return monomial(std::move(ctx), Monomial::variable(v));
}

Polynomial Polynomial::variable(ContextPtr ctx, std::string_view name) {
    VarIndex v = ctx->index_of(name);
    return variable(std::move(ctx), v);
}

Polynomial Polynomial::monomial(ContextPtr ctx, Monomial m, const Rational& c) {
    Polynomial p(std::move(ctx));
    if (sgn(c) != 0)
        p.terms_.push_back({std::move(m), c});
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.is_one());
}

bool Polynomial::is_one() const noexcept {
    return terms_.size() == 1 && terms_.front().monomial.is_one() && terms_.front().coeff == 1;
}

Rational Polynomial::constant_term() const {
    if (!terms_.empty() && terms_.back().monomial.is_one())
        return terms_.back().coeff;
    return 0;
}

const Term& Polynomial::leading_term() const {
    if (terms_.empty())
        throw Error("leading term of the zero polynomial");
    return terms_.front();
}

std::uint32_t Polynomial::total_degree() const noexcept {
    return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

std::uint32_t Polynomial::degree_in(VarIndex v) const noexcept {
    std::uint32_t d = 0;
    for (const auto& t : terms_)
        d = std::max(d, t.monomial.exponent(v));
    return d;
}

bool Polynomial::involves(VarIndex v) const noexcept {
    return std::any_of(terms_.begin(), terms_.end(),
                       [v](const Term& t) { return t.monomial.exponent(v) > 0; });
}

std::vector<VarIndex> Polynomial::variables() const {
    std::vector<VarIndex> vars;
    for (const auto& t : terms_)
        for (const auto& f : t.monomial.factors())
            vars.push_back(f.first);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::vector<Polynomial> Polynomial::coefficients_in(VarIndex v) const {
    std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
    for (const auto& t : terms_) {
        auto e = t.monomial.exponent(v);
        buckets[e].push_back({t.monomial.without(v), t.coeff});
    }
    std::vector<Polynomial> out;
    out.reserve(buckets.size());
    for (auto& b : buckets)
        out.emplace_back(ctx_, std::move(b));
    return out;
}

Polynomial Polynomial::leading_coefficient_in(VarIndex v) const {
    auto d = degree_in(v);
    std::vector<Term> terms;
    for (const auto& t : terms_)
        if (t.monomial.exponent(v) == d)
            terms.push_back({t.monomial.without(v), t.coeff});
    return Polynomial(ctx_, std::move(terms));
}

Polynomial Polynomial::coefficient_of(const Monomial& mono, std::span<const VarIndex> vars) const {
    std::vector<VarIndex> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        auto part = t.monomial.restricted_to(sorted);
        if (part == mono)
            terms.push_back({t.monomial.quotient(part), t.coeff});
    }
    return Polynomial(ctx_, std::move(terms));
}

Polynomial Polynomial::derivative(VarIndex v) const {
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        auto e = t.monomial.exponent(v);
        if (e == 0)
            continue;
        Monomial m = t.monomial.quotient(Monomial::variable(v));
        terms.push_back({std::move(m), t.coeff * e});
    }
    return Polynomial(ctx_, std::move(terms));
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = constant(ctx_, 1);
    Polynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1U)
            result *= base;
        exponent >>= 1U;
        if (exponent > 0)
            base = base * base;
    }
    return result;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    if (sgn(c) == 0)
        return Polynomial(ctx_);
    Polynomial p = *this;
    for (auto& t : p.terms_)
        t.coeff *= c;
    return p;
}

Polynomial Polynomial::times_monomial(const Monomial& m) const {
    Polynomial p(ctx_);
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
        p.terms_.push_back({t.monomial * m, t.coeff});
    return p;
}

Polynomial Polynomial::divided_by_monomial(const Monomial& m) const {
    Polynomial p(ctx_);
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!m.divides(t.monomial))
            throw Error("monomial does not divide polynomial");
        p.terms_.push_back({t.monomial.quotient(m), t.coeff});
    }
    return p;
}

Polynomial Polynomial::monic() const {
    if (terms_.empty() || terms_.front().coeff == 1)
        return *this;
    Rational inv = 1 / terms_.front().coeff;
    return scaled(inv);
}

Monomial Polynomial::monomial_content() const {
    if (terms_.empty())
        return Monomial();
    Monomial g = terms_.front().monomial;
    for (const auto& t : terms_) {
        g = gcd(g, t.monomial);
        if (g.is_one())
            break;
    }
    return g;
}

std::optional<Polynomial> Polynomial::exact_divide(const Polynomial& divisor) const {
    check_context(divisor);
    if (divisor.is_zero())
        throw DivisionByZero("polynomial division by zero");
    if (divisor.is_constant())
        return scaled(1 / divisor.leading_coefficient());
    if (divisor.is_monomial()) {
        const auto& d = divisor.leading_term();
        for (const auto& t : terms_)
            if (!d.monomial.divides(t.monomial))
                return std::nullopt;
        return divided_by_monomial(d.monomial).scaled(1 / d.coeff);
    }
    const Term& lead = divisor.leading_term();
    Rational inv = 1 / lead.coeff;
    Polynomial remainder = *this;
    std::vector<Term> quotient;
    while (!remainder.is_zero()) {
        const Term& lt = remainder.leading_term();
        if (!lead.monomial.divides(lt.monomial))
            return std::nullopt;
        Term q{lt.monomial.quotient(lead.monomial), lt.coeff * inv};
        Polynomial step = Polynomial::monomial(ctx_, q.monomial, q.coeff) * divisor;
        remainder -= step;
        quotient.push_back(std::move(q));
    }
    return Polynomial(ctx_, std::move(quotient));
}

Polynomial Polynomial::divide_exact(const Polynomial& divisor) const {
    auto q = exact_divide(divisor);
    if (!q)
        throw Error("polynomial division is not exact");
    return std::move(*q);
}

Polynomial Polynomial::lifted(const ContextPtr& target) const {
    if (same_context(ctx_, target))
        return Polynomial(target, terms_);
    std::vector<VarIndex> remap(ctx_->size());
    for (VarIndex i = 0; i < ctx_->size(); ++i) {
        auto idx = target->find((*ctx_)[i].name);
        remap[i] = idx ? *idx : static_cast<VarIndex>(-1);
    }
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) {
        std::vector<Monomial::Factor> f;
        for (const auto& [v, e] : t.monomial.factors()) {
            if (remap[v] == static_cast<VarIndex>(-1))
                throw ContextMismatch("indeterminate '" + (*ctx_)[v].name +
                                      "' is absent from the target context");
            f.emplace_back(remap[v], e);
        }
        terms.push_back({Monomial::from_factors(std::move(f)), t.coeff});
    }
    return Polynomial(target, std::move(terms));
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_)
        t.coeff = -t.coeff;
    return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    check_context(rhs);
    std::vector<Term> out;
    out.reserve(terms_.size() + rhs.terms_.size());
    auto i = terms_.begin();
    auto j = rhs.terms_.begin();
    while (i != terms_.end() || j != rhs.terms_.end()) {
        int c = 0;
        if (i == terms_.end())
            c = -1;
        else if (j == rhs.terms_.end())
            c = 1;
        else
            c = compare_grlex(i->monomial, j->monomial);
        if (c > 0) {
            out.push_back(std::move(*i++));
        } else if (c < 0) {
            out.push_back(*j++);
        } else {
            Rational s = i->coeff + j->coeff;
            if (sgn(s) != 0)
                out.push_back({std::move(i->monomial), std::move(s)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    return *this += -rhs;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
    *this = *this * rhs;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_context(b);
    if (a.is_zero() || b.is_zero())
        return Polynomial(a.ctx_);
    if (b.is_constant())
        return a.scaled(b.leading_coefficient());
    if (a.is_constant())
        return b.scaled(a.leading_coefficient());
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    Rational prod;
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            prod = ta.coeff * tb.coeff;
            auto [it, inserted] = acc.try_emplace(ta.monomial * tb.monomial, prod);
            if (!inserted)
                it->second += prod;
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (sgn(c) != 0)
            terms.push_back({m, std::move(c)});
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
        return compare_grlex(x.monomial, y.monomial) > 0;
    });
    Polynomial p(a.ctx_);
    p.terms_ = std::move(terms);
    return p;
}

bool Polynomial::operator==(const Polynomial& other) const {
    return same_context(ctx_, other.ctx_) && terms_ == other.terms_;
}

void Polynomial::check_context(const Polynomial& other) const {
    if (!same_context(ctx_, other.ctx_))
        throw ContextMismatch("polynomials live in different contexts");
}

std::vector<Polynomial> coefficient_forms(const Polynomial& p, std::span<const VarIndex> inner) {
    std::map<std::vector<Monomial::Factor>, Polynomial> groups;
    for (const auto& t : p.terms()) {
        std::vector<Monomial::Factor> in, out;
        for (const auto& f : t.monomial.factors())
            (std::find(inner.begin(), inner.end(), f.first) != inner.end() ? in : out).push_back(f);
        auto term = Polynomial::monomial(p.context(), Monomial::from_factors(std::move(in)), t.coeff);
        auto [it, fresh] = groups.try_emplace(std::move(out), p.context());
        it->second += term;
    }
    std::vector<Polynomial> forms;
    for (auto& [m, c] : groups)
        if (!c.is_zero())
            forms.push_back(std::move(c));
    return forms;
}

} // namespace phase_atlas
