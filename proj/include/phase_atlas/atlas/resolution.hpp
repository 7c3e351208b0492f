#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas {

/// Pushes `f` through the step's map. When a golden is named, exact
/// equality is required and a mismatch throws VerificationError listing
/// the disagreeing equations.
VectorField apply_resolution_step(const VectorField& f, const RationalMap& substitution,
                                  const VectorField* expected = nullptr);

/// Outcome of one `RESULT = MAP(SOURCE)` line of a step.
struct StepResult {
    std::string step;
    std::string kind;
    bool derived = false;
    std::string result;
    std::string map;
    std::optional<std::string> golden;
    bool matched_golden = false;
    std::vector<std::string> mismatches;
    /// Differences against the typeset variant of the golden, if one exists.
    std::vector<std::string> typeset_differences;
    /// Pole order of each rhs along each coordinate that occurs in a denominator.
    std::vector<std::string> pole_summary;
    /// For derived steps: every denominator is a single coordinate to the
    /// first power and that coordinate's own rhs is polynomial.
    bool legal = true;
    std::string error;
    double ms_elapsed = 0;
};

struct TerminalResult {
    std::string field;
    std::string chart;
    bool map_matches = false;
    bool polynomial = false;
    std::string detail;

    bool ok() const { return map_matches && polynomial; }
};

struct ReplayReport {
    std::vector<StepResult> results;
    std::vector<TerminalResult> terminals;
    /// Distinct step ids, in order, excluding setup blocks and derived steps.
    std::vector<std::string> typeset_steps;
    std::vector<std::string> derived_steps;

    bool ok() const;
};

/// Runs every setup block and step of the fixtures in file order, starting
/// from the base field; `specialization` is applied to every field and map
/// first (e.g. a2 -> 0).
ReplayReport replay_resolution(const FixtureSet& fixtures, const Bindings& specialization = {});

} // namespace phase_atlas
