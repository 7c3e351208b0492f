#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phase_atlas/symcore/rational_expr.hpp"

namespace phase_atlas {

/// The unique indeterminate of kind `time`, if the context declares one.
std::optional<VarIndex> time_variable(const Context& ctx);

/// Non-autonomous vector field: dc_i/dt = rhs_i for an ordered tuple of
/// state coordinates. The time variable is never a coordinate.
class VectorField {
  public:
    VectorField(std::string label, std::vector<VarIndex> coords, std::vector<RationalExpr> rhs);

    const std::string& label() const noexcept { return label_; }
    const std::vector<VarIndex>& coords() const noexcept { return coords_; }
    const std::vector<RationalExpr>& rhs() const noexcept { return rhs_; }
    const ContextPtr& context() const noexcept { return rhs_.front().context(); }
    std::size_t dimension() const noexcept { return coords_.size(); }

    /// Right-hand side of coordinate `v`; throws if `v` is not a coordinate.
    const RationalExpr& rhs_for(VarIndex v) const;
    std::optional<std::size_t> position_of(VarIndex v) const;
    std::vector<std::string> coordinate_names() const;

    /// d/dt of g along the flow: sum_j dg/dc_j * rhs_j + dg/dt.
    RationalExpr lie_derivative(const RationalExpr& g) const;

    /// Substitutes into every rhs (e.g. specializing parameters).
    VectorField specialized(const Bindings& bindings) const;
    VectorField relabeled(std::string label) const;
    /// Same field re-indexed into `target`, matching indeterminates by name.
    VectorField lifted(const ContextPtr& target) const;

  private:
    std::string label_;
    std::vector<VarIndex> coords_;
    std::vector<RationalExpr> rhs_;
};

/// Human-readable differences between a computed and an expected field,
/// one entry per disagreeing coordinate; empty when they agree exactly.
std::vector<std::string> compare_fields(const VectorField& computed, const VectorField& expected);

/// Exponent of `divisor` in the canonical denominator of each rhs.
std::vector<int> pole_order(const VectorField& f, const Polynomial& divisor);

struct ManifoldRestriction {
    bool invariant = false;
    /// d/dt of the constraint, with the constraint imposed.
    RationalExpr residual;
    /// Field on the remaining coordinates with the constraint imposed.
    VectorField reduced;
};

/// `constraint` must be k*c - g with c a coordinate, k a nonzero constant
/// and g free of c.
ManifoldRestriction restrict_to_manifold(const VectorField& f, const Polynomial& constraint);

} // namespace phase_atlas
