#pragma once

#include "phase_atlas/symcore/parser.hpp"
#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas::testing {

/// Fixture set shared by a test binary; loaded once.
inline const FixtureSet& fixtures() {
    static const FixtureSet set = load_fixtures(default_fixture_dir());
    return set;
}

inline RationalExpr fx(std::string_view text) { return parse_expression(text, fixtures().context); }

inline Polynomial fpoly(std::string_view text) { return fx(text).numerator(); }

inline VarIndex fvar(std::string_view name) { return fixtures().context->index_of(name); }

} // namespace phase_atlas::testing
