#pragma once

#include <span>
#include <string>
#include <vector>

#include "phase_atlas/symcore/rational_expr.hpp"

namespace phase_atlas {

/// Floating-point evaluator for a RationalExpr. The expression is flattened
/// once into term tapes over a fixed list of input slots; evaluation is then
/// a loop over doubles with no symbolic work.
class CompiledExpr {
  public:
    CompiledExpr() = default;
    /// `slots[k]` names the indeterminate read from input position k. Every
    /// indeterminate of `e` must appear in `slots`.
    CompiledExpr(const RationalExpr& e, std::span<const std::string> slots);

    double operator()(std::span<const double> inputs) const;
    double numerator(std::span<const double> inputs) const { return eval(num_, inputs); }
    double denominator(std::span<const double> inputs) const { return has_den_ ? eval(den_, inputs) : 1.0; }

  private:
    struct Tape {
        std::vector<double> coeffs;
        // For term i, factors [offsets[i], offsets[i+1]) of (slot, exponent).
        std::vector<std::size_t> offsets;
        std::vector<std::pair<unsigned, unsigned>> factors;
    };

    static Tape compile(const Polynomial& p, const std::vector<int>& slot_of);
    static double eval(const Tape& tape, std::span<const double> inputs);

    Tape num_;
    Tape den_;
    bool has_den_ = false;
};

} // namespace phase_atlas
