#include "phase_atlas/mero/phase_space.hpp"

#include <cmath>
#include <limits>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

namespace {

constexpr std::array<const char*, 4> kExtraSlots{"t", "a1", "a2", "a3"};

std::array<double, 7> inputs(const State& y, double t, const Params& a) {
    return {y[0], y[1], y[2], t, a[0], a[1], a[2]};
}

} // namespace

CompiledTriple::CompiledTriple(const std::vector<RationalExpr>& components, const std::vector<VarIndex>& coords,
                               const Context& ctx) {
    if (components.size() != 3 || coords.size() != 3)
        throw Error("the numeric phase space is three-dimensional");
    std::vector<std::string> slots;
    for (VarIndex v : coords)
        slots.push_back(ctx[v].name);
    for (const char* s : kExtraSlots)
        slots.emplace_back(s);
    for (std::size_t k = 0; k < 3; ++k)
        parts_[k] = CompiledExpr(components[k], slots);
}

State CompiledTriple::operator()(const State& y, double t, const Params& a) const {
    const auto in = inputs(y, t, a);
    State out;
    for (std::size_t k = 0; k < 3; ++k) {
        const double d = parts_[k].denominator(in);
        out[k] = d == 0 ? std::numeric_limits<double>::infinity() : parts_[k].numerator(in) / d;
    }
    return out;
}

double CompiledTriple::denominator(std::size_t k, const State& y, double t, const Params& a) const {
    return parts_.at(k).denominator(inputs(y, t, a));
}

PhaseSpace::PhaseSpace(const FixtureSet& fixtures) {
    const auto charts = builtin_atlas(fixtures);
    const auto& ctx = *fixtures.context;
    for (const auto& c : charts) {
        names_.push_back(c.name);
        std::vector<std::string> coords;
        for (VarIndex v : c.coords())
            coords.push_back(ctx[v].name);
        coord_names_.push_back(std::move(coords));
        fields_.emplace_back(c.field.rhs(), c.coords(), ctx);
    }
    transitions_.resize(charts.size());
    for (const auto& a : charts)
        for (const auto& b : charts) {
            const auto m = compose(a.to_U0(), b.from_U0);
            transitions_[&a - charts.data()].emplace_back(m.forward(), a.coords(), ctx);
        }
}

const PhaseSpace& PhaseSpace::builtin() {
    static const PhaseSpace space(load_fixtures(default_fixture_dir()));
    return space;
}

std::size_t PhaseSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return i;
    throw Error("unknown chart '" + std::string(name) + "'");
}

State PhaseSpace::rhs(std::size_t chart, const State& y, double t, const Params& a) const {
    return fields_.at(chart)(y, t, a);
}

std::optional<State> PhaseSpace::transform(std::size_t from, std::size_t to, const State& y, double t,
                                           const Params& a) const {
    if (from == to)
        return y;
    const State out = transitions_.at(from).at(to)(y, t, a);
    for (double v : out)
        if (!std::isfinite(v))
            return std::nullopt;
    return out;
}

State PhaseSpace::to_U0(std::size_t chart, const State& y, double t, const Params& a) const {
    return chart == 0 ? y : transitions_.at(chart).at(0)(y, t, a);
}

double PhaseSpace::u0_denominator(std::size_t chart, std::size_t k, const State& y, double t,
                                  const Params& a) const {
    return transitions_.at(chart).at(0).denominator(k, y, t, a);
}

} // namespace phase_atlas
