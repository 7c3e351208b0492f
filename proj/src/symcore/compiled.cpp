#include "phase_atlas/symcore/compiled.hpp"

#include <cmath>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

CompiledExpr::CompiledExpr(const RationalExpr& e, std::span<const std::string> slots) {
    const auto& ctx = *e.context();
    std::vector<int> slot_of(ctx.size(), -1);
    for (std::size_t k = 0; k < slots.size(); ++k)
        slot_of[ctx.index_of(slots[k])] = static_cast<int>(k);
    for (VarIndex v : e.variables())
        if (slot_of[v] < 0)
            throw Error("compiled expression reads '" + ctx[v].name + "' which has no input slot");
    num_ = compile(e.numerator(), slot_of);
    has_den_ = !e.denominator().is_one();
    if (has_den_)
        den_ = compile(e.denominator(), slot_of);
}

CompiledExpr::Tape CompiledExpr::compile(const Polynomial& p, const std::vector<int>& slot_of) {
    Tape tape;
    tape.offsets.push_back(0);
    for (const auto& t : p.terms()) {
        tape.coeffs.push_back(t.coeff.get_d());
        for (const auto& [v, e] : t.monomial.factors())
            tape.factors.emplace_back(static_cast<unsigned>(slot_of[v]), e);
        tape.offsets.push_back(tape.factors.size());
    }
    return tape;
}

double CompiledExpr::eval(const Tape& tape, std::span<const double> inputs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < tape.coeffs.size(); ++i) {
        double term = tape.coeffs[i];
        for (std::size_t k = tape.offsets[i]; k < tape.offsets[i + 1]; ++k) {
            const auto [slot, e] = tape.factors[k];
            const double x = inputs[slot];
            switch (e) {
            case 1: term *= x; break;
            case 2: term *= x * x; break;
            case 3: term *= x * x * x; break;
            default: term *= std::pow(x, static_cast<double>(e)); break;
            }
        }
        sum += term;
    }
    return sum;
}

double CompiledExpr::operator()(std::span<const double> inputs) const {
    const double n = eval(num_, inputs);
    if (!has_den_)
        return n;
    return n / eval(den_, inputs);
}

} // namespace phase_atlas
