#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phase_atlas/singular/singular.hpp"
#include "phase_atlas/symcore/linear_algebra.hpp"
#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas {

/// Image of a state and a parameter assignment under a Backlund map.
struct BacklundImage {
    std::vector<RationalExpr> state;
    Bindings parameters;
};

/// Substitutes `state` (one value per source coordinate) and `parameters`
/// into the map and its parameter action. Parameters without a value stay
/// symbolic. Throws DivisionByZero at a pole of the map.
BacklundImage apply_backlund(const RationalMap& s, const std::vector<RationalExpr>& state,
                             const Bindings& parameters = {});

/// For each coordinate, d/dt of the transformed coordinate along f minus
/// f's rhs at the transformed coordinates and parameters. All entries are
/// zero iff f is invariant under s.
std::vector<RationalExpr> invariance_residual(const VectorField& f, const RationalMap& s);

bool is_invariant(const VectorField& f, const RationalMap& s);

/// Solution space of the invariance constraints over the quadratic ansatz
/// f_i = e_i1 x^2 + e_i2 y^2 + e_i3 z^2 + e_i4 xy + e_i5 yz + e_i6 zx
///     + e_i7 tx + e_i8 ty + e_i9 tz + e_i10 a1 + e_i11 a2 + e_i12 a3 [+ e_i13].
struct InvariantFamily {
    ContextPtr context;
    /// One label per column, e.g. "dy/dt: x*y"; 13 columns per equation.
    std::vector<std::string> columns;
    std::vector<Monomial> column_monomials;
    /// Columns that carry an unknown (the affine constant is optional).
    std::vector<std::size_t> active_columns;
    std::vector<VarIndex> unknowns;
    /// Number of linear constraints collected from both maps.
    std::size_t constraints = 0;
    /// Basis of the solution space, as full column vectors.
    std::vector<RationalVector> basis;
    VectorField ansatz;
    /// General member written in the free unknowns.
    VectorField family;

    std::size_t dimension() const { return basis.size(); }
    /// Column vector of a field of ansatz shape; throws Error otherwise.
    RationalVector coefficients_of(const VectorField& f) const;
    bool contains(const VectorField& f) const;
};

/// `base` fixes the coordinates, time and parameters; `maps` are the
/// symmetries imposed. Throws Error for an inconsistent system.
InvariantFamily derive_invariant_family(const VectorField& base, const std::vector<RationalMap>& maps,
                                        bool affine_constant = false);

/// The derived family against a printed one that is linear in its
/// coefficient letters.
struct FamilyComparison {
    std::size_t printed_rank = 0;
    /// The quadratic and t-linear columns span the same space.
    bool quadratic_span_matches = false;
    bool printed_invariant = false;
    /// Printed member with its constant terms replaced by the derived ones.
    std::optional<VectorField> derived_in_printed_letters;
    /// "d<c>/dt constant: printed P, derived D" for every disagreement.
    std::vector<std::string> constant_discrepancies;
    /// Invariant directions with no quadratic part, e.g. "dx/dt: 3*a1 + 2*a2 + a3";
    /// derived constants are fixed only up to multiples of these.
    std::vector<std::string> free_constant_directions;
};

FamilyComparison compare_with_printed(const InvariantFamily& family, const VectorField& printed,
                                      const std::vector<RationalMap>& maps);

struct DecouplingResult {
    /// Distinct conditions, each a primitive integer polynomial = 0.
    std::vector<Polynomial> conditions;
    /// Linear conditions solved for their latest-declared coefficient.
    Bindings solution;
    /// Remaining coordinates with the solution imposed.
    std::optional<VectorField> subsystem;

    bool holds_identically() const { return conditions.empty(); }
};

/// Conditions under which no rhs other than the decoupled coordinate's
/// involves that coordinate.
DecouplingResult decoupling_check(const VectorField& family, VarIndex decoupled);

/// Index of `family` at [0:1:0:0] in the (p,q,r) chart; entries stay
/// symbolic in the family coefficients. Throws Error when the point is not
/// accessible.
LocalIndex p3_index_family(const FixtureSet& fixtures, const VectorField& family);

/// Reduction of a larger system onto a constraint, matched against a
/// target field under a computed renaming of coordinates and parameters.
struct ReductionReport {
    /// Residual of the constraint with the parameters left symbolic.
    RationalExpr generic_residual;
    /// Invariance once the specialization is imposed.
    bool invariant = false;
    std::optional<VectorField> reduced;
    /// (from, to) pairs, coordinates first.
    std::vector<std::pair<std::string, std::string>> renaming;
    bool matched = false;
    std::vector<std::string> mismatches;
};

/// Noumi-Yamada system on x = 0 with b1 = 0, matched against the base field.
ReductionReport ny_reduction_check(const FixtureSet& fixtures);

struct PainleveReport {
    RationalExpr generic_residual;
    bool invariant = false;
    std::optional<VectorField> reduced;
    bool matched = false;
    std::vector<std::string> mismatches;
    /// dx/dt as c0 + c1 x + c2 x^2 + ...
    std::vector<RationalExpr> riccati_coefficients;
    bool riccati = false;
};

/// Base field on x = 0 with a1 = 0, matched against the `piv` fixture.
PainleveReport piv_reduction_check(const FixtureSet& fixtures);

} // namespace phase_atlas
