#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "phase_atlas/symcore/context.hpp"

namespace phase_atlas {

/// Power product stored sparsely as (variable, exponent) pairs sorted by
/// variable index, exponents strictly positive.
class Monomial {
  public:
    using Factor = std::pair<VarIndex, std::uint32_t>;

    Monomial() = default;
    static Monomial variable(VarIndex v, std::uint32_t exponent = 1);
    /// Builds from arbitrary pairs; merges duplicates and drops zero exponents.
    static Monomial from_factors(std::vector<Factor> factors);

    bool is_one() const noexcept { return factors_.empty(); }
    std::uint32_t degree() const noexcept { return degree_; }
    std::uint32_t exponent(VarIndex v) const noexcept;
    std::span<const Factor> factors() const noexcept { return factors_; }

    bool divides(const Monomial& other) const noexcept;
    /// this / divisor; precondition: divisor.divides(*this).
    Monomial quotient(const Monomial& divisor) const;
    Monomial without(VarIndex v) const;
    Monomial restricted_to(std::span<const VarIndex> sorted_vars) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend Monomial gcd(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial&) const = default;

  private:
    std::vector<Factor> factors_;
    std::uint32_t degree_ = 0;
};

/// Graded-lex comparison: negative, zero, positive as a <, ==, > b.
int compare_grlex(const Monomial& a, const Monomial& b) noexcept;

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept {
        return compare_grlex(a, b) > 0;
    }
};

std::size_t hash_value(const Monomial& m) noexcept;

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return hash_value(m); }
};

} // namespace phase_atlas
