#include "phase_atlas/vfield/rational_map.hpp"

#include <algorithm>

#include "phase_atlas/error.hpp"
#include "phase_atlas/symcore/parser.hpp"

namespace phase_atlas {

RationalMap::RationalMap(std::string name, std::vector<VarIndex> source,
                         std::vector<VarIndex> target, std::vector<RationalExpr> forward,
                         std::vector<RationalExpr> inverse, Bindings parameter_action)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
      forward_(std::move(forward)), inverse_(std::move(inverse)),
      params_(std::move(parameter_action)) {
    if (source_.empty() || source_.size() != target_.size() ||
        forward_.size() != target_.size() || inverse_.size() != source_.size())
        throw Error("map '" + name_ + "': component counts do not match");
    for (const auto& e : forward_)
        if (!same_context(e.context(), forward_.front().context()))
            throw ContextMismatch("map '" + name_ + "': component contexts disagree");
    for (const auto& e : inverse_)
        if (!same_context(e.context(), forward_.front().context()))
            throw ContextMismatch("map '" + name_ + "': component contexts disagree");
    const Context& ctx = *context();
    for (const auto& [p, e] : params_)
        if (ctx[p].kind != IndeterminateKind::parameter)
            throw Error("map '" + name_ + "': parameter action on non-parameter " + ctx[p].name);
    if (auto t = time_variable(ctx);
        t && (std::count(source_.begin(), source_.end(), *t) ||
              std::count(target_.begin(), target_.end(), *t)))
        throw Error("map '" + name_ + "': time is never transformed");
}

Bindings RationalMap::forward_bindings() const {
    Bindings b;
    for (std::size_t i = 0; i < target_.size(); ++i)
        b.emplace(target_[i], forward_[i]);
    return b;
}

Bindings RationalMap::inverse_bindings() const {
    Bindings b;
    for (std::size_t j = 0; j < source_.size(); ++j)
        b.emplace(source_[j], inverse_[j]);
    return b;
}

std::vector<std::string> RationalMap::round_trip_defects() const {
    std::vector<std::string> out;
    const ContextPtr& ctx = context();
    auto check = [&](const std::vector<RationalExpr>& comps, const std::vector<VarIndex>& vars,
                     const Bindings& back, const char* which) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            RationalExpr image(ctx);
            try {
                image = substitute(comps[i], back);
            } catch (const DivisionByZero&) {
                out.push_back(std::string(which) + " " + (*ctx)[vars[i]].name +
                              ": substitution divides by zero");
                continue;
            }
            RationalExpr expect = RationalExpr(Polynomial::variable(ctx, vars[i]));
            if (image != expect)
                out.push_back(std::string(which) + " " + (*ctx)[vars[i]].name + " -> " +
                              to_string(image));
        }
    };
    check(forward_, target_, inverse_bindings(), "inverse then forward:");
    check(inverse_, source_, forward_bindings(), "forward then inverse:");
    return out;
}

void RationalMap::verify() const {
    auto defects = round_trip_defects();
    if (defects.empty())
        return;
    std::string msg = "map '" + name_ + "' fails its round trip";
    for (const auto& d : defects)
        msg += "; " + d;
    throw VerificationError(msg);
}

RationalMap RationalMap::inverted() const {
    Bindings params;
    // An affine parameter action is not inverted here; Backlund maps carry
    // their own inverse as a separate map.
    return RationalMap(name_ + "^-1", target_, source_, inverse_, forward_, params);
}

RationalMap RationalMap::specialized(const Bindings& bindings) const {
    RationalMap out = *this;
    for (auto& e : out.forward_)
        e = substitute(e, bindings);
    for (auto& e : out.inverse_)
        e = substitute(e, bindings);
    for (auto& [p, e] : out.params_)
        e = substitute(e, bindings);
    return out;
}

RationalMap RationalMap::renamed(std::string name) const {
    RationalMap out = *this;
    out.name_ = std::move(name);
    return out;
}

RationalMap RationalMap::lifted(const ContextPtr& target) const {
    const Context& ctx = *context();
    auto lift_vars = [&](const std::vector<VarIndex>& vs) {
        std::vector<VarIndex> out;
        for (VarIndex v : vs)
            out.push_back(target->index_of(ctx[v].name));
        return out;
    };
    auto lift_exprs = [&](const std::vector<RationalExpr>& es) {
        std::vector<RationalExpr> out;
        for (const auto& e : es)
            out.push_back(e.lifted(target));
        return out;
    };
    Bindings params;
    for (const auto& [p, e] : params_)
        params.emplace(target->index_of(ctx[p].name), e.lifted(target));
    return RationalMap(name_, lift_vars(source_), lift_vars(target_), lift_exprs(forward_),
                       lift_exprs(inverse_), std::move(params));
}

RationalMap compose(const RationalMap& first, const RationalMap& second) {
    if (first.target() != second.source())
        throw Error("cannot compose '" + first.name() + "' then '" + second.name() +
                    "': coordinates do not line up");
    std::vector<RationalExpr> fwd, inv;
    const Bindings fb = first.forward_bindings();
    for (const auto& e : second.forward())
        fwd.push_back(substitute(e, fb));
    const Bindings sb = second.inverse_bindings();
    for (const auto& e : first.inverse())
        inv.push_back(substitute(e, sb));
    return RationalMap(second.name() + "." + first.name(), first.source(), second.target(),
                       std::move(fwd), std::move(inv));
}

bool same_forward(const RationalMap& a, const RationalMap& b) {
    return a.source() == b.source() && a.target() == b.target() && a.forward() == b.forward();
}

VectorField pushforward(const VectorField& f, const RationalMap& m) {
    {
        auto fs = f.coords(), ms = m.source();
        std::sort(fs.begin(), fs.end());
        std::sort(ms.begin(), ms.end());
        if (fs != ms)
            throw Error("pushforward of " + f.label() + " by " + m.name() +
                        ": field coordinates differ from the map's source");
    }
    m.verify();
    const Bindings back = m.inverse_bindings();
    std::vector<RationalExpr> rhs;
    for (const auto& comp : m.forward()) {
        RationalExpr g = substitute(f.lie_derivative(comp), back);
        for (VarIndex s : m.source())
            if (g.involves(s) && std::find(m.target().begin(), m.target().end(), s) ==
                                     m.target().end())
                throw VerificationError("pushforward by " + m.name() + ": source variable " +
                                        (*f.context())[s].name + " survives elimination");
        rhs.push_back(std::move(g));
    }
    return VectorField(m.name() + "(" + f.label() + ")", m.target(), std::move(rhs));
}

} // namespace phase_atlas
