#include "phase_atlas/vfield/vector_field.hpp"

#include <algorithm>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas {

std::optional<VarIndex> time_variable(const Context& ctx) {
    for (VarIndex i = 0; i < ctx.size(); ++i)
        if (ctx[i].kind == IndeterminateKind::time)
            return i;
    return std::nullopt;
}

VectorField::VectorField(std::string label, std::vector<VarIndex> coords,
                         std::vector<RationalExpr> rhs)
    : label_(std::move(label)), coords_(std::move(coords)), rhs_(std::move(rhs)) {
    if (coords_.empty() || coords_.size() != rhs_.size())
        throw Error("vector field '" + label_ + "': rhs arity does not match coordinates");
    for (const auto& r : rhs_)
        if (!same_context(r.context(), rhs_.front().context()))
            throw ContextMismatch("vector field '" + label_ + "': rhs contexts disagree");
    const Context& ctx = *context();
    for (VarIndex c : coords_) {
        if (c >= ctx.size() || ctx[c].kind != IndeterminateKind::state)
            throw Error("vector field '" + label_ + "': coordinate is not a state variable");
        if (std::count(coords_.begin(), coords_.end(), c) != 1)
            throw Error("vector field '" + label_ + "': repeated coordinate " + ctx[c].name);
    }
}

std::optional<std::size_t> VectorField::position_of(VarIndex v) const {
    auto it = std::find(coords_.begin(), coords_.end(), v);
    if (it == coords_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - coords_.begin());
}

const RationalExpr& VectorField::rhs_for(VarIndex v) const {
    auto pos = position_of(v);
    if (!pos)
        throw Error("'" + (*context())[v].name + "' is not a coordinate of " + label_);
    return rhs_[*pos];
}

std::vector<std::string> VectorField::coordinate_names() const {
    std::vector<std::string> out;
    for (VarIndex c : coords_)
        out.push_back((*context())[c].name);
    return out;
}

RationalExpr VectorField::lie_derivative(const RationalExpr& g) const {
    RationalExpr out(context());
    for (std::size_t j = 0; j < coords_.size(); ++j)
        if (g.involves(coords_[j]))
            out += g.differentiate(coords_[j]) * rhs_[j];
    if (auto t = time_variable(*context()); t && g.involves(*t))
        out += g.differentiate(*t);
    return out;
}

VectorField VectorField::specialized(const Bindings& bindings) const {
    std::vector<RationalExpr> rhs;
    for (const auto& r : rhs_)
        rhs.push_back(substitute(r, bindings));
    return VectorField(label_, coords_, std::move(rhs));
}

VectorField VectorField::relabeled(std::string label) const {
    VectorField out = *this;
    out.label_ = std::move(label);
    return out;
}

VectorField VectorField::lifted(const ContextPtr& target) const {
    const Context& ctx = *context();
    std::vector<VarIndex> coords;
    for (VarIndex c : coords_)
        coords.push_back(target->index_of(ctx[c].name));
    std::vector<RationalExpr> rhs;
    for (const auto& r : rhs_)
        rhs.push_back(r.lifted(target));
    return VectorField(label_, std::move(coords), std::move(rhs));
}

std::vector<std::string> compare_fields(const VectorField& computed, const VectorField& expected) {
    std::vector<std::string> out;
    if (computed.coords() != expected.coords()) {
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& x : v)
                s += (s.empty() ? "" : ",") + x;
            return s;
        };
        out.push_back("coordinates (" + join(computed.coordinate_names()) + ") vs (" +
                      join(expected.coordinate_names()) + ")");
        return out;
    }
    const Context& ctx = *computed.context();
    for (std::size_t i = 0; i < computed.dimension(); ++i) {
        const auto& a = computed.rhs()[i];
        const auto& b = expected.rhs()[i];
        if (a == b)
            continue;
        out.push_back("d" + ctx[computed.coords()[i]].name + "/dt: computed " + to_string(a) +
                      ", expected " + to_string(b) + ", difference " + to_string(a - b));
    }
    return out;
}

std::vector<int> pole_order(const VectorField& f, const Polynomial& divisor) {
    if (divisor.is_constant())
        throw Error("pole_order: divisor must be nonconstant");
    std::vector<int> out;
    for (const auto& r : f.rhs()) {
        int k = 0;
        Polynomial d = r.denominator();
        while (auto q = d.exact_divide(divisor)) {
            d = std::move(*q);
            ++k;
        }
        out.push_back(k);
    }
    return out;
}

ManifoldRestriction restrict_to_manifold(const VectorField& f, const Polynomial& constraint) {
    const ContextPtr& ctx = f.context();
    for (VarIndex c : f.coords()) {
        if (constraint.degree_in(c) != 1)
            continue;
        auto coeffs = constraint.coefficients_in(c);
        if (!coeffs[1].is_constant())
            continue;
        // constraint = k*c + rest, so the manifold is c = -rest/k
        RationalExpr value = RationalExpr(-coeffs[0]) /
                             RationalExpr::constant(ctx, coeffs[1].constant_term());
        Bindings on_manifold{{c, value}};
        RationalExpr residual = substitute(f.lie_derivative(RationalExpr(constraint)), on_manifold);
        std::vector<VarIndex> coords;
        std::vector<RationalExpr> rhs;
        for (std::size_t j = 0; j < f.dimension(); ++j) {
            if (f.coords()[j] == c)
                continue;
            coords.push_back(f.coords()[j]);
            rhs.push_back(substitute(f.rhs()[j], on_manifold));
        }
        if (coords.empty())
            throw Error("restrict_to_manifold: nothing left after eliminating the only coordinate");
        return {residual.is_zero(), residual,
                VectorField(f.label() + "|" + to_string(constraint) + "=0", std::move(coords),
                            std::move(rhs))};
    }
    throw Error("restrict_to_manifold: constraint " + to_string(constraint) +
                " is not solvable for a coordinate of " + f.label());
}

} // namespace phase_atlas
