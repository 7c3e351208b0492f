#include "phase_atlas/singular/univariate.hpp"

#include <algorithm>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

namespace {

void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

// Positive divisors of |n| by trial division.
std::vector<mpz_class> divisors(mpz_class n) {
    n = abs(n);
    static const mpz_class limit("1000000000000");
    if (n > limit)
        throw Error("coefficient too large for the rational root search");
    std::vector<std::pair<mpz_class, unsigned>> primes;
    for (mpz_class d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            n /= d;
            ++e;
        }
        if (e)
            primes.emplace_back(d, e);
    }
    if (n > 1)
        primes.emplace_back(n, 1);
    std::vector<mpz_class> out{1};
    for (const auto& [p, e] : primes) {
        const std::size_t base = out.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * pk);
        }
    }
    return out;
}

// p / (x - r), assuming r is a root.
UPoly deflate(const UPoly& p, const Rational& r) {
    UPoly q(p.size() - 1);
    Rational carry = 0;
    for (std::size_t k = p.size() - 1; k >= 1; --k) {
        carry = p[k] + carry * r;
        q[k - 1] = carry;
    }
    return q;
}

} // namespace

UPoly univariate_coefficients(const Polynomial& p, VarIndex v) {
    UPoly out(p.degree_in(v) + 1);
    for (const auto& t : p.terms()) {
        for (const auto& [w, e] : t.monomial.factors())
            if (w != v)
                throw Error("expected a polynomial in one indeterminate");
        out[t.monomial.exponent(v)] = t.coeff;
    }
    trim(out);
    return out;
}

Rational evaluate(const UPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

RationalRootSplit rational_roots(UPoly p) {
    trim(p);
    if (p.empty())
        throw Error("the zero polynomial has no finite root set");
    RationalRootSplit out;
    unsigned zeros = 0;
    while (p.size() > 1 && p.front() == 0) {
        p.erase(p.begin());
        ++zeros;
    }
    if (zeros)
        out.roots.push_back({Rational(0), zeros});

    if (p.size() > 1) {
        // Candidates p/q with p | a_0 and q | a_n after clearing denominators.
        mpz_class lcm_den = 1;
        for (const auto& c : p)
            mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
        const mpz_class a0(p.front() * lcm_den);
        const mpz_class an(p.back() * lcm_den);
        std::vector<Rational> candidates;
        for (const auto& a : divisors(a0))
            for (const auto& b : divisors(an)) {
                Rational r(a, b);
                r.canonicalize();
                candidates.push_back(r);
                candidates.push_back(-r);
            }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (const auto& r : candidates) {
            unsigned m = 0;
            while (p.size() > 1 && evaluate(p, r) == 0) {
                p = deflate(p, r);
                ++m;
            }
            if (m)
                out.roots.push_back({r, m});
        }
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    const Rational lc = p.back();
    for (auto& c : p)
        c /= lc;
    out.cofactor = std::move(p);
    return out;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0)
        return std::nullopt;
    const mpz_class n = q.get_num();
    const mpz_class d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return Rational(sn, sd);
}

} // namespace phase_atlas
