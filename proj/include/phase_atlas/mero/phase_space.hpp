#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phase_atlas/atlas/atlas.hpp"
#include "phase_atlas/symcore/compiled.hpp"

namespace phase_atlas {

using State = std::array<double, 3>;
using Params = std::array<double, 3>;

/// Three compiled components reading (c1, c2, c3, t, a1, a2, a3).
class CompiledTriple {
  public:
    CompiledTriple() = default;
    CompiledTriple(const std::vector<RationalExpr>& components, const std::vector<VarIndex>& coords,
                   const Context& ctx);

    /// Values; a component whose denominator vanishes is +inf.
    State operator()(const State& y, double t, const Params& a) const;
    /// Denominator of component k.
    double denominator(std::size_t k, const State& y, double t, const Params& a) const;

  private:
    std::array<CompiledExpr, 3> parts_;
};

/// The eight charts with compiled fields and compiled exact transitions.
/// Immutable after construction and safe to share between threads.
class PhaseSpace {
  public:
    explicit PhaseSpace(const FixtureSet& fixtures);

    /// Built once from the default fixture directory.
    static const PhaseSpace& builtin();

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t chart) const { return names_.at(chart); }
    std::size_t index_of(std::string_view name) const;
    const std::vector<std::string>& coordinate_names(std::size_t chart) const { return coord_names_.at(chart); }

    State rhs(std::size_t chart, const State& y, double t, const Params& a) const;
    /// Image of y under the exact transition; nullopt at a pole of the map.
    std::optional<State> transform(std::size_t from, std::size_t to, const State& y, double t,
                                   const Params& a) const;
    /// U0 image; infinite entries at poles.
    State to_U0(std::size_t chart, const State& y, double t, const Params& a) const;
    /// Denominator of the k-th U0 coordinate written in `chart`.
    double u0_denominator(std::size_t chart, std::size_t k, const State& y, double t, const Params& a) const;

  private:
    std::vector<std::string> names_;
    std::vector<std::vector<std::string>> coord_names_;
    std::vector<CompiledTriple> fields_;
    /// transitions_[from][to]
    std::vector<std::vector<CompiledTriple>> transitions_;
};

} // namespace phase_atlas
