#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phase_atlas/symcore/context.hpp"
#include "phase_atlas/symcore/monomial.hpp"

namespace phase_atlas {

using Rational = mpq_class;

struct Term {
    Monomial monomial;
    Rational coeff;

    bool operator==(const Term&) const = default;
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted by
/// decreasing graded-lex order with no zero coefficients, so two equal
/// polynomials over the same context have identical term vectors.
class Polynomial {
  public:
    explicit Polynomial(ContextPtr ctx);
    Polynomial(ContextPtr ctx, std::vector<Term> terms);

    static Polynomial constant(ContextPtr ctx, const Rational& c);
    static Polynomial variable(ContextPtr ctx, VarIndex v);
    static Polynomial variable(ContextPtr ctx, std::string_view name);
    static Polynomial monomial(ContextPtr ctx, Monomial m, const Rational& c = 1);

    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    bool is_one() const noexcept;
    bool is_monomial() const noexcept { return terms_.size() == 1; }
    /// Constant term value (zero when absent).
    Rational constant_term() const;
    const Term& leading_term() const;
    const Rational& leading_coefficient() const { return leading_term().coeff; }

    std::uint32_t total_degree() const noexcept;
    std::uint32_t degree_in(VarIndex v) const noexcept;
    bool involves(VarIndex v) const noexcept;
    /// Sorted list of variables that occur.
    std::vector<VarIndex> variables() const;

    /// Dense list c_0..c_d with p = sum c_k v^k and c_k free of v.
    std::vector<Polynomial> coefficients_in(VarIndex v) const;
    Polynomial leading_coefficient_in(VarIndex v) const;

    /// Coefficient of `mono` (a monomial over `vars`) when p is viewed as a
    /// polynomial in `vars` with coefficients in the remaining indeterminates.
    Polynomial coefficient_of(const Monomial& mono, std::span<const VarIndex> vars) const;

    Polynomial derivative(VarIndex v) const;
    Polynomial pow(unsigned exponent) const;
    Polynomial scaled(const Rational& c) const;
    Polynomial times_monomial(const Monomial& m) const;
    /// Divide every term by `m`; precondition: m divides every monomial.
    Polynomial divided_by_monomial(const Monomial& m) const;
    /// Scale so the leading coefficient is 1 (zero stays zero).
    Polynomial monic() const;
    /// GCD of all term monomials.
    Monomial monomial_content() const;

    /// Exact quotient, or nullopt if `divisor` does not divide this.
    std::optional<Polynomial> exact_divide(const Polynomial& divisor) const;
    /// Exact quotient; throws Error when the division is not exact.
    Polynomial divide_exact(const Polynomial& divisor) const;

    /// Same polynomial re-indexed into `target` (matched by name).
    Polynomial lifted(const ContextPtr& target) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(const Polynomial& rhs);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    bool operator==(const Polynomial& other) const;

  private:
    void check_context(const Polynomial& other) const;

    ContextPtr ctx_;
    std::vector<Term> terms_;
};

/// Splits p = sum_m m * c_m over the monomials m in the indeterminates
/// outside `inner`; returns the nonzero c_m, which involve only `inner`.
/// p vanishes identically iff every returned polynomial does.
std::vector<Polynomial> coefficient_forms(const Polynomial& p, std::span<const VarIndex> inner);

/// Greatest common divisor over Q, normalized to leading coefficient 1.
/// gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Pseudo-remainder of a by b with respect to v.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, VarIndex v);

/// Resultant with respect to v (Sylvester determinant, fraction-free).
Polynomial resultant(const Polynomial& a, const Polynomial& b, VarIndex v);

std::string to_string(const Rational& q);

} // namespace phase_atlas
