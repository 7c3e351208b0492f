#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phase_atlas {

using VarIndex = std::uint32_t;

enum class IndeterminateKind { state, time, parameter, coefficient };

std::string_view to_string(IndeterminateKind kind);

struct Indeterminate {
    std::string name;
    IndeterminateKind kind = IndeterminateKind::state;

    bool operator==(const Indeterminate&) const = default;
};

class Context;
using ContextPtr = std::shared_ptr<const Context>;

/// Ordered list of indeterminates. Position in the list fixes the monomial
/// order: earlier variables are larger under graded-lex.
class Context {
  public:
    static ContextPtr make(std::vector<Indeterminate> vars);

    std::size_t size() const noexcept { return vars_.size(); }
    const Indeterminate& operator[](VarIndex i) const { return vars_.at(i); }
    const std::vector<Indeterminate>& variables() const noexcept { return vars_; }

    std::optional<VarIndex> find(std::string_view name) const;
    /// Throws Error when the name is not declared.
    VarIndex index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name).has_value(); }

    /// New context with `extra` appended; names already present must agree in kind.
    ContextPtr extended(const std::vector<Indeterminate>& extra) const;

    bool operator==(const Context& other) const { return vars_ == other.vars_; }

  private:
    explicit Context(std::vector<Indeterminate> vars);

    std::vector<Indeterminate> vars_;
    std::unordered_map<std::string, VarIndex> index_;
};

bool same_context(const ContextPtr& a, const ContextPtr& b);

} // namespace phase_atlas
