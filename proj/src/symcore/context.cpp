#include "phase_atlas/symcore/context.hpp"

#include "phase_atlas/error.hpp"

namespace phase_atlas {

std::string_view to_string(IndeterminateKind kind) {
    switch (kind) {
    case IndeterminateKind::state: return "state";
    case IndeterminateKind::time: return "time";
    case IndeterminateKind::parameter: return "parameter";
    case IndeterminateKind::coefficient: return "coefficient";
    }
    return "state";
}

Context::Context(std::vector<Indeterminate> vars) : vars_(std::move(vars)) {
    for (VarIndex i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name.empty())
            throw Error("indeterminate with empty name");
        if (!index_.emplace(vars_[i].name, i).second)
            throw Error("indeterminate '" + vars_[i].name + "' declared twice");
    }
}

ContextPtr Context::make(std::vector<Indeterminate> vars) {
    return ContextPtr(new Context(std::move(vars)));
}

std::optional<VarIndex> Context::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

VarIndex Context::index_of(std::string_view name) const {
    auto idx = find(name);
    if (!idx)
        throw Error("undeclared identifier '" + std::string(name) + "'");
    return *idx;
}

ContextPtr Context::extended(const std::vector<Indeterminate>& extra) const {
    std::vector<Indeterminate> vars = vars_;
    for (const auto& v : extra) {
        if (auto idx = find(v.name)) {
            if (vars_[*idx].kind != v.kind)
                throw Error("indeterminate '" + v.name + "' redeclared with a different kind");
            continue;
        }
        vars.push_back(v);
    }
    return make(std::move(vars));
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
    return a == b || (a && b && *a == *b);
}

} // namespace phase_atlas
