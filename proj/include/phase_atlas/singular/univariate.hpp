#pragma once

#include <optional>
#include <vector>

#include "phase_atlas/symcore/polynomial.hpp"

namespace phase_atlas {

/// Dense univariate polynomial c_0 + c_1 x + ... with no trailing zeros.
using UPoly = std::vector<Rational>;

/// Coefficients of p as a polynomial in v; throws Error if p involves any
/// other indeterminate.
UPoly univariate_coefficients(const Polynomial& p, VarIndex v);

Rational evaluate(const UPoly& p, const Rational& x);

struct RootMultiplicity {
    Rational value;
    unsigned multiplicity = 0;
};

/// Rational roots with multiplicity plus the monic cofactor that has no
/// rational root (degree 0 means every root was rational).
struct RationalRootSplit {
    std::vector<RootMultiplicity> roots;
    UPoly cofactor;
};

/// Roots found by the rational root theorem, ascending. Throws Error for the
/// zero polynomial or when the integer coefficients are too large to factor
/// by trial division.
RationalRootSplit rational_roots(UPoly p);

/// Exact square root of a nonnegative rational, if it is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& q);

} // namespace phase_atlas
