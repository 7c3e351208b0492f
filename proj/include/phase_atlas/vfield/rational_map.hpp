#pragma once

#include <string>
#include <vector>

#include "phase_atlas/vfield/vector_field.hpp"

namespace phase_atlas {

/// Birational change of coordinates with a stored inverse. The forward
/// components express the target coordinates in the source ones, the
/// inverse components the other way round. Time is never transformed.
/// An optional parameter action records how a Backlund map moves the
/// parameters; coordinate maps leave it empty.
class RationalMap {
  public:
    RationalMap(std::string name, std::vector<VarIndex> source, std::vector<VarIndex> target,
                std::vector<RationalExpr> forward, std::vector<RationalExpr> inverse,
                Bindings parameter_action = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<VarIndex>& source() const noexcept { return source_; }
    const std::vector<VarIndex>& target() const noexcept { return target_; }
    const std::vector<RationalExpr>& forward() const noexcept { return forward_; }
    const std::vector<RationalExpr>& inverse() const noexcept { return inverse_; }
    const Bindings& parameter_action() const noexcept { return params_; }
    const ContextPtr& context() const noexcept { return forward_.front().context(); }

    /// target_i -> forward_i, for rewriting target expressions in source terms.
    Bindings forward_bindings() const;
    /// source_j -> inverse_j, for rewriting source expressions in target terms.
    Bindings inverse_bindings() const;

    /// Failed round-trip identities, empty when both compositions are the identity.
    std::vector<std::string> round_trip_defects() const;
    /// Throws VerificationError naming the map when a round trip fails.
    void verify() const;

    RationalMap inverted() const;
    /// Substitutes into every component (e.g. specializing parameters).
    RationalMap specialized(const Bindings& bindings) const;
    RationalMap renamed(std::string name) const;
    /// Same map re-indexed into `target`, matching indeterminates by name.
    RationalMap lifted(const ContextPtr& target) const;

  private:
    std::string name_;
    std::vector<VarIndex> source_;
    std::vector<VarIndex> target_;
    std::vector<RationalExpr> forward_;
    std::vector<RationalExpr> inverse_;
    Bindings params_;
};

/// second after first; requires first.target() == second.source().
RationalMap compose(const RationalMap& first, const RationalMap& second);

/// Same source, target and forward components.
bool same_forward(const RationalMap& a, const RationalMap& b);

/// g_i = sum_j dF_i/ds_j f_j + dF_i/dt with the source eliminated through
/// the inverse. Throws VerificationError when the map fails its round trip
/// or a source variable survives elimination.
VectorField pushforward(const VectorField& f, const RationalMap& m);

} // namespace phase_atlas
