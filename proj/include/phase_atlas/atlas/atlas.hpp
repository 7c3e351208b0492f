#pragma once

#include <string>
#include <vector>

#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas {

/// One of the affine charts U0..U7 glued into the phase space.
struct Chart {
    std::string name;
    /// U0 -> chart, as typeset. U0's map is the identity.
    RationalMap from_U0;
    /// Pushforward of the base field into the chart coordinates.
    VectorField field;

    const std::vector<VarIndex>& coords() const { return from_U0.target(); }
    RationalMap to_U0() const { return from_U0.inverted(); }
};

struct HolomorphyReport {
    std::string chart;
    bool polynomial = false;
    /// "d<c>/dt: denominator <poly>" for every non-polynomial rhs.
    std::vector<std::string> offending_terms;
};

/// Result of loading and certifying one chart; never throws.
struct ChartCheck {
    std::string chart;
    bool round_trip = false;
    bool polynomial = false;
    std::vector<std::string> problems;
    double ms_elapsed = 0;

    bool ok() const { return round_trip && polynomial; }
};

inline constexpr const char* kBaseField = "eq1";

Chart make_chart(std::string name, const VectorField& base, const RationalMap& from_U0);

/// U0..U7 from the fixtures; throws VerificationError when a chart fails
/// its round trip or its field is not polynomial.
std::vector<Chart> builtin_atlas(const FixtureSet& fixtures);

HolomorphyReport certify_holomorphic(const Chart& chart);

/// Checks U1..U7 concurrently and reports each one.
std::vector<ChartCheck> check_atlas(const FixtureSet& fixtures);

struct TransitionCheck {
    std::string from;
    std::string to;
    bool consistent = false;
    std::string detail;
};

/// For every ordered pair of charts with transition F, checks the chain rule
/// L_f(F_i) = g_i(F) in the source chart as a denominator-cleared identity.
std::vector<TransitionCheck> check_transitions(const std::vector<Chart>& charts);

} // namespace phase_atlas
