#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas {

/// Projective point [z0:z1:z2:z3], scaled so its last nonzero entry is 1.
using Homogeneous = std::array<Rational, 4>;

Homogeneous normalized(Homogeneous h);
std::string to_string(const Homogeneous& h);

/// Affine chart of P^3 that meets the boundary divisor {z0 = 0}.
struct BoundaryChart {
    std::string name;
    /// For each homogeneous slot, the chart coordinate position it holds,
    /// or -1 for the constant 1. Slot 0 is always the boundary coordinate.
    std::array<int, 4> slots;

    std::size_t boundary_position() const { return static_cast<std::size_t>(slots[0]); }
    Homogeneous homogeneous(const std::vector<Rational>& local) const;
};

/// uvw, lmn and pqr; earlier charts take priority when a point is visible
/// in several of them.
const std::vector<BoundaryChart>& boundary_charts();
const BoundaryChart& boundary_chart(std::string_view name);

/// Index at an accessible point: the constant `a` of the boundary
/// coordinate's rhs and the two eigenvalues of the tangential linearization.
struct LocalIndex {
    RationalExpr a;
    std::array<RationalExpr, 2> eigenvalues;
    /// Chart coordinate order with `a` in the boundary coordinate's slot.
    std::array<RationalExpr, 3> tuple;
    /// The tangential Jacobian was triangular, so eigenvalues follow the
    /// chart order; otherwise they are sorted ascending.
    bool triangular = true;
    std::vector<std::string> warnings;

    /// Tuple as rationals; nullopt when an entry depends on parameters.
    std::optional<std::array<Rational, 3>> constant_tuple() const;
    /// (1, b/a, c/a) with b, c the eigenvalues; nullopt when a is zero or symbolic.
    std::optional<std::array<Rational, 3>> normalized() const;
};

std::string to_string(const LocalIndex& index);

/// Local index of `f` at `point` (values for f's coordinates, boundary entry
/// zero). Throws Error for a non-simple pole, an inaccessible point, a
/// t-dependent linearization or eigenvalues that are not rational functions.
LocalIndex local_index(const VectorField& f, const std::vector<Rational>& point, VarIndex boundary);

/// Common zeros on {boundary = 0} of the polar numerators, required for all
/// t and all parameter values.
struct AccessibleScan {
    /// Rational points in f's coordinate order (boundary entry zero).
    std::vector<std::vector<Rational>> points;
    /// Common zeros whose coordinates are not rational.
    std::vector<std::string> unresolved;
    /// Curves or the whole divisor when the zero locus is not finite.
    std::vector<std::string> positive_dimensional;
};

/// Throws Error when the boundary's own rhs has a pole along it or another
/// rhs has a pole of order above one.
AccessibleScan find_accessible(const VectorField& f, VarIndex boundary);

struct AccessibleSingularity {
    std::string chart;
    std::vector<Rational> local;
    Homogeneous homogeneous;
    std::optional<LocalIndex> index;
    std::string index_error;
};

struct ChartScan {
    std::string chart;
    std::vector<AccessibleSingularity> points;
    std::vector<std::string> unresolved;
    std::vector<std::string> positive_dimensional;
};

/// Pushes `base` into the boundary chart (fixture map of the same name) and
/// scans it.
ChartScan scan_chart(const FixtureSet& fixtures, const BoundaryChart& chart, const VectorField& base);

struct TableRow {
    PointRecord expected;
    bool found = false;
    Homogeneous homogeneous{};
    std::string chart;
    std::optional<std::array<Rational, 3>> index;
    /// Field the index was read from.
    std::string index_source;
    /// Other charts in which the point is visible.
    std::vector<std::string> also_seen_in;
    std::vector<std::string> problems;

    bool matched() const { return found && problems.empty(); }
};

struct TableReport {
    std::vector<TableRow> rows;
    /// Points found but absent from the table.
    std::vector<AccessibleSingularity> extra;
    std::vector<std::string> unresolved;
    std::vector<std::string> positive_dimensional;
    std::size_t distinct_points = 0;

    std::size_t matched_rows() const;
    bool ok() const;
};

/// Scans the three boundary charts of the base field, merges points by
/// their homogeneous coordinates and compares with the fixture table.
TableReport verify_table(const FixtureSet& fixtures);

} // namespace phase_atlas
