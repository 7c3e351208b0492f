#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phase_atlas/error.hpp"
#include "phase_atlas/mero/phase_space.hpp"
#include "phase_atlas/mero/stepper.hpp"

namespace phase_atlas {

/// Raised when no chart brings a large state back to moderate size.
class AtlasIncompleteError : public IntegrationError {
  public:
    using IntegrationError::IntegrationError;
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    /// A chart switch is considered once the sup norm exceeds this.
    double switch_radius = 10;
    /// A switch is taken when the best chart's sup norm is below
    /// hysteresis times the current one.
    double hysteresis = 0.5;
    /// Sup norm at which a missing switch is reported as atlas incompleteness.
    double hard_limit = 1e4;
    double initial_step = 1e-3;
    double max_step = 0.25;
    double min_step = 1e-13;
    std::size_t max_steps = 2'000'000;
    bool dense_output = true;

    /// Throws Error when an invariant is violated.
    void validate() const;
};

struct Sample {
    double t = 0;
    std::size_t chart = 0;
    State coords{};
};

struct ChartSwitch {
    double t = 0;
    std::size_t from = 0;
    std::size_t to = 0;
    State before{};
    State after{};
};

struct PoleEstimate {
    double t_star = 0;
    /// U0 coordinates whose denominator vanishes at t_star.
    std::array<bool, 3> diverging{};
    /// Residues (zero for finite coordinates), and the one-sided estimates.
    State residue{};
    State left{};
    State right{};
};

struct PoleEvent {
    double t_star = 0;
    std::size_t chart = 0;
    /// Missing when the event is too close to an end of the span.
    std::optional<PoleEstimate> estimate;
};

struct Trajectory {
    Params params{};
    /// Strictly monotone in t; pole samples are inserted at t_star.
    std::vector<Sample> samples;
    std::vector<ChartSwitch> switches;
    std::vector<PoleEvent> pole_events;
    /// One per accepted step when dense output is on.
    std::vector<DenseSegment> segments;
    std::vector<std::size_t> segment_charts;
    std::size_t rejected_steps = 0;

    const Sample& end() const { return samples.back(); }
    /// Chart and coordinates at t from the dense output.
    Sample at(double t) const;
};

/// Integrates the base field from `ic` given in chart `chart`, switching
/// charts through exact transitions. Throws AtlasIncompleteError or
/// IntegrationError (step-size underflow, step budget).
Trajectory integrate_in_chart(const PhaseSpace& space, std::size_t chart, const State& ic, double t0, double t1,
                              const Params& params, const IntegratorConfig& cfg = {});

/// Same, starting from a U0 state.
Trajectory integrate_meromorphic(const PhaseSpace& space, const State& ic, double t0, double t1,
                                 const Params& params, const IntegratorConfig& cfg = {});

/// t_star by bisection on the vanishing U0 denominator over the event's
/// step, residues by extrapolating (t - t_star) x(t) from both sides.
/// Throws Error when no sign change is bracketed.
PoleEstimate estimate_pole(const PhaseSpace& space, const Trajectory& traj, const PoleEvent& event);

/// Simple pole of value(t) at a sign change of denominator(t) inside
/// [lo, hi]; value * (t - t_star) is extrapolated from both sides.
struct SimplePole {
    double t_star = 0;
    double residue = 0;
    double left = 0;
    double right = 0;
};
SimplePole estimate_simple_pole(const std::function<double(double)>& value,
                                const std::function<double(double)>& denominator, double lo, double hi);

/// Leading-order balances x_i ~ c_i / (t - t_star) of a field whose
/// quadratic part has the form x_i * L_i(x). Sorted lexicographically.
std::vector<std::array<Rational, 3>> laurent_balances(const VectorField& f);

/// Balance within `rel` (relative to the largest entry) of `residue`.
std::optional<std::array<Rational, 3>> matching_balance(const State& residue,
                                                        const std::vector<std::array<Rational, 3>>& balances,
                                                        double rel);

/// Largest relative defect of mapping a switch's post-state back into the
/// pre-switch chart.
double switch_roundtrip_error(const PhaseSpace& space, const Trajectory& traj);

/// Relative sup distance between two endpoints, compared in `a`'s chart.
double endpoint_distance(const PhaseSpace& space, const Trajectory& a, const Trajectory& b);

/// Endpoint deviation between integrating then applying `s`, and applying
/// `s` then integrating with the transformed parameters. Throws
/// IntegrationError when the trajectory crosses the map's pole locus.
double backlund_commutation_test(const PhaseSpace& space, const RationalMap& s, const State& ic,
                                 const Params& params, double t0, double t1, const IntegratorConfig& cfg = {});

struct SweepFailure {
    std::size_t run = 0;
    State ic{};
    Params params{};
    std::string kind;
    std::string message;
};

struct SweepReport {
    std::size_t runs = 0;
    std::size_t completed = 0;
    std::size_t atlas_incomplete = 0;
    std::size_t pole_events = 0;
    /// Ordered by run.
    std::vector<SweepFailure> failures;
};

/// Random initial conditions and parameters, uniform in the given boxes,
/// from a fixed seed; runs are spread over worker threads.
SweepReport robustness_sweep(const PhaseSpace& space, std::size_t runs, std::uint64_t seed, double t0, double t1,
                             double ic_bound = 2, double alpha_bound = 1, const IntegratorConfig& cfg = {});

} // namespace phase_atlas
