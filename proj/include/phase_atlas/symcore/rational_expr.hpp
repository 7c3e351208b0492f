#pragma once

#include <map>
#include <span>
#include <vector>

#include "phase_atlas/symcore/polynomial.hpp"

namespace phase_atlas {

/// Quotient of two polynomials in canonical form: gcd(num, den) = 1 and the
/// leading coefficient of den is 1. Canonical form makes equality structural.
class RationalExpr {
  public:
    explicit RationalExpr(ContextPtr ctx);
    RationalExpr(Polynomial numerator); // NOLINT: polynomials embed implicitly
    /// Normalizes; throws DivisionByZero for a zero denominator.
    RationalExpr(Polynomial numerator, Polynomial denominator);

    static RationalExpr constant(ContextPtr ctx, const Rational& c);
    static RationalExpr variable(ContextPtr ctx, std::string_view name);

    /// Polynomial factor raised to a power.
    using Factor = std::pair<Polynomial, unsigned>;
    /// num / prod f^e, normalized by cancelling against each factor separately.
    /// Much cheaper than one gcd with the expanded product when factors are small.
    static RationalExpr from_factored(Polynomial numerator, std::vector<Factor> denominator);

    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }
    const ContextPtr& context() const noexcept { return num_.context(); }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_one(); }
    bool is_constant() const noexcept { return den_.is_one() && num_.is_constant(); }
    /// Value of a constant expression; throws otherwise.
    Rational constant_value() const;

    /// True iff the canonical denominator involves none of `vars`.
    bool is_polynomial_in(std::span<const VarIndex> vars) const;
    bool involves(VarIndex v) const { return num_.involves(v) || den_.involves(v); }
    std::vector<VarIndex> variables() const;

    RationalExpr differentiate(VarIndex v) const;
    RationalExpr pow(unsigned exponent) const;
    RationalExpr lifted(const ContextPtr& target) const;

    RationalExpr operator-() const;
    RationalExpr& operator+=(const RationalExpr& rhs);
    RationalExpr& operator-=(const RationalExpr& rhs);
    RationalExpr& operator*=(const RationalExpr& rhs);
    RationalExpr& operator/=(const RationalExpr& rhs);
    friend RationalExpr operator+(RationalExpr a, const RationalExpr& b) { return a += b; }
    friend RationalExpr operator-(RationalExpr a, const RationalExpr& b) { return a -= b; }
    friend RationalExpr operator*(RationalExpr a, const RationalExpr& b) { return a *= b; }
    friend RationalExpr operator/(RationalExpr a, const RationalExpr& b) { return a /= b; }

    bool operator==(const RationalExpr& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }

  private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

enum class ArithOp { add, sub, mul, div, pow };

RationalExpr arith(ArithOp op, const RationalExpr& a, const RationalExpr& b);
RationalExpr arith(ArithOp op, const RationalExpr& a, long exponent);

/// a - b normalizes to zero.
bool equals(const RationalExpr& a, const RationalExpr& b);

using Bindings = std::map<VarIndex, RationalExpr>;

/// Simultaneous substitution. Throws DivisionByZero when the image of a
/// denominator is identically zero.
RationalExpr substitute(const RationalExpr& e, const Bindings& bindings);
RationalExpr substitute(const Polynomial& p, const Bindings& bindings);

/// Numerator and denominator of the image without any cancellation. Suited to
/// denominator-cleared identities where the canonical form is not needed.
std::pair<Polynomial, Polynomial> substitute_cleared(const RationalExpr& e, const Bindings& bindings);

/// Bindings from textual names, convenient for tests and fixtures.
Bindings make_bindings(const ContextPtr& ctx,
                       std::initializer_list<std::pair<std::string_view, RationalExpr>> items);

} // namespace phase_atlas
