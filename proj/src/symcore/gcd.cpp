#include <algorithm>
#include <optional>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/polynomial.hpp"

namespace phase_atlas {

namespace {

Polynomial gcd_content_free(const Polynomial& a, const Polynomial& b);

Polynomial content_in(const Polynomial& p, VarIndex v) {
    auto coeffs = p.coefficients_in(v);
    Polynomial g(p.context());
    for (const auto& c : coeffs) {
        if (c.is_zero())
            continue;
        g = gcd(g, c);
        if (g.is_one())
            break;
    }
    return g;
}

Polynomial primitive_part_in(const Polynomial& p, VarIndex v) {
    if (p.is_zero())
        return p;
    Polynomial c = content_in(p, v);
    Polynomial q = c.is_one() ? p : p.divide_exact(c);
    return q.monic();
}

// Image of p in Q[v] with every other variable set to a fixed small integer.
std::vector<Rational> univariate_image(const Polynomial& p, VarIndex v) {
    std::vector<Rational> out(p.degree_in(v) + 1);
    for (const auto& t : p.terms()) {
        Rational c = t.coeff;
        std::uint32_t ev = 0;
        for (const auto& [var, e] : t.monomial.factors()) {
            if (var == v) {
                ev = e;
                continue;
            }
            // distinct, fixed evaluation points; no randomness so results are reproducible
            mpz_class point = 3 + 7 * static_cast<long>(var % 97) + (var * var) % 11;
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), point.get_mpz_t(), e);
            c *= pw;
        }
        out[ev] += c;
    }
    return out;
}

// Degree of gcd(a, b) in Q[x] for dense coefficient vectors.
std::size_t univariate_gcd_degree(std::vector<Rational> a, std::vector<Rational> b) {
    auto trim = [](std::vector<Rational>& p) {
        while (!p.empty() && p.back() == 0)
            p.pop_back();
    };
    trim(a);
    trim(b);
    if (a.size() < b.size())
        std::swap(a, b);
    while (!b.empty()) {
        // a <- a mod b
        while (a.size() >= b.size() && !a.empty()) {
            Rational f = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] -= f * b[i];
            a.pop_back();
            trim(a);
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// Degree in v of gcd(a, b) taken at the evaluation point, or nullopt when
// a leading coefficient vanishes there (the image would prove nothing).
std::optional<std::size_t> image_gcd_degree(const Polynomial& a, const Polynomial& b, VarIndex v) {
    auto ia = univariate_image(a, v);
    auto ib = univariate_image(b, v);
    if (ia.back() == 0 || ib.back() == 0)
        return std::nullopt;
    return univariate_gcd_degree(std::move(ia), std::move(ib));
}

// Choose the shared variable of smallest combined degree.
VarIndex pick_main_variable(const Polynomial& a, const Polynomial& b,
                            const std::vector<VarIndex>& shared) {
    VarIndex best = shared.front();
    std::uint32_t best_deg = ~0U;
    for (VarIndex v : shared) {
        auto d = std::max(a.degree_in(v), b.degree_in(v));
        if (d < best_deg) {
            best_deg = d;
            best = v;
        }
    }
    return best;
}

Polynomial gcd_content_free(const Polynomial& a, const Polynomial& b) {
    const auto& ctx = a.context();
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(ctx, 1);

    auto va = a.variables();
    auto vb = b.variables();
    for (VarIndex v : va)
        if (!std::binary_search(vb.begin(), vb.end(), v))
            return gcd(content_in(a, v), b);
    for (VarIndex v : vb)
        if (!std::binary_search(va.begin(), va.end(), v))
            return gcd(a, content_in(b, v));

    // If the gcd is free of some v it divides both contents in v, and the
    // gcd of those contents divides a and b, so the two gcds agree.
    for (VarIndex w : va)
        if (image_gcd_degree(a, b, w) == std::optional<std::size_t>(0))
            return gcd(content_in(a, w), content_in(b, w));

    VarIndex v = pick_main_variable(a, b, va);
    Polynomial ca = content_in(a, v);
    Polynomial cb = content_in(b, v);
    Polynomial c = gcd(ca, cb);
    Polynomial p = ca.is_one() ? a : a.divide_exact(ca);
    Polynomial q = cb.is_one() ? b : b.divide_exact(cb);
    if (p.degree_in(v) < q.degree_in(v))
        std::swap(p, q);
    p = p.monic();
    q = q.monic();
    if (image_gcd_degree(p, q, v) == std::optional<std::size_t>(q.degree_in(v)))
        if (p.exact_divide(q))
            return (c * q).monic();
    while (!q.is_zero()) {
        if (q.degree_in(v) == 0) {
            p = Polynomial::constant(ctx, 1);
            break;
        }
        Polynomial r = pseudo_remainder(p, q, v);
        p = std::move(q);
        q = primitive_part_in(r, v);
    }
    Polynomial g = primitive_part_in(p, v);
    return (c * g).monic();
}

} // namespace

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, VarIndex v) {
    if (b.is_zero())
        throw DivisionByZero("pseudo-remainder by zero");
    const auto db = b.degree_in(v);
    Polynomial lb = b.leading_coefficient_in(v);
    Polynomial r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        auto dr = r.degree_in(v);
        Polynomial lr = r.leading_coefficient_in(v);
        Polynomial shift = b.times_monomial(Monomial::variable(v, dr - db));
        r = r * lb - lr * shift;
    }
    return r;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (!same_context(a.context(), b.context()))
        throw ContextMismatch("gcd of polynomials from different contexts");
    if (a.is_zero())
        return b.monic();
    if (b.is_zero())
        return a.monic();
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(a.context(), 1);
    if (a == b)
        return a.monic();

    Monomial ma = a.monomial_content();
    Monomial mb = b.monomial_content();
    Monomial mg = gcd(ma, mb);
    Polynomial a1 = ma.is_one() ? a : a.divided_by_monomial(ma);
    Polynomial b1 = mb.is_one() ? b : b.divided_by_monomial(mb);
    Polynomial g = gcd_content_free(a1, b1);
    return g.times_monomial(mg).monic();
}

Polynomial resultant(const Polynomial& a, const Polynomial& b, VarIndex v) {
    if (!same_context(a.context(), b.context()))
        throw ContextMismatch("resultant of polynomials from different contexts");
    const auto& ctx = a.context();
    if (a.is_zero() || b.is_zero())
        return Polynomial(ctx);
    const auto m = a.degree_in(v);
    const auto n = b.degree_in(v);
    if (m == 0 && n == 0)
        return Polynomial::constant(ctx, 1);
    if (m == 0)
        return a.pow(n);
    if (n == 0)
        return b.pow(m);

    auto ca = a.coefficients_in(v);
    auto cb = b.coefficients_in(v);
    const std::size_t size = m + n;
    std::vector<std::vector<Polynomial>> mat(size, std::vector<Polynomial>(size, Polynomial(ctx)));
    for (std::size_t row = 0; row < n; ++row)
        for (std::size_t k = 0; k <= m; ++k)
            mat[row][row + k] = ca[m - k];
    for (std::size_t row = 0; row < m; ++row)
        for (std::size_t k = 0; k <= n; ++k)
            mat[n + row][row + k] = cb[n - k];

    // Bareiss fraction-free elimination.
    Polynomial prev = Polynomial::constant(ctx, 1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < size; ++k) {
        if (mat[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < size && mat[swap_row][k].is_zero())
                ++swap_row;
            if (swap_row == size)
                return Polynomial(ctx);
            std::swap(mat[k], mat[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < size; ++i) {
            for (std::size_t j = k + 1; j < size; ++j) {
                Polynomial num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j];
                mat[i][j] = num.divide_exact(prev);
            }
            mat[i][k] = Polynomial(ctx);
        }
        prev = mat[k][k];
    }
    Polynomial det = mat[size - 1][size - 1];
    return sign < 0 ? -det : det;
}

} // namespace phase_atlas
