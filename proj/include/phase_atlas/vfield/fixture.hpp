#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phase_atlas/vfield/rational_map.hpp"

namespace phase_atlas {

/// `RESULT = MAP(SOURCE) expect GOLDEN printed ALT` inside a step block.
struct ApplyRecord {
    std::string result;
    std::string map;
    std::string source;
    std::optional<std::string> expect;
    /// Golden as typeset, when it is known to differ from `expect`.
    std::optional<std::string> printed;
    std::size_t line = 0;
};

struct CenterRecord {
    std::string name;
    std::vector<Polynomial> equations;
};

/// A resolution step (or a `setup` block, kind "setup") as read from file.
struct StepRecord {
    std::string id;
    std::string kind;
    /// Not typeset in the source; derived and checked only for legality.
    bool derived = false;
    std::vector<CenterRecord> centers;
    std::vector<ApplyRecord> applications;
    std::string file;
    std::size_t line = 0;
};

/// `terminal FIELD = MAP`: the composite map that produced FIELD from the
/// base field must equal MAP.
struct TerminalRecord {
    std::string field;
    std::string chart;
    std::size_t line = 0;
};

/// A row of the accessible-singularity table.
struct PointRecord {
    std::string name;
    std::array<Rational, 4> homogeneous;
    std::string chart;
    std::array<Rational, 3> index;
    std::string type;
    int family_dimension = 0;
    /// Field whose origin is this point, used for its index when set.
    std::string local_system;
    std::size_t line = 0;
};

/// Everything read from a fixture directory, sharing one context.
struct FixtureSet {
    ContextPtr context;
    std::map<std::string, VectorField> fields;
    std::map<std::string, RationalMap> maps;
    std::vector<StepRecord> steps;
    std::vector<TerminalRecord> terminals;
    std::vector<PointRecord> points;

    const VectorField& field(const std::string& name) const;
    const RationalMap& map(const std::string& name) const;
    bool has_field(const std::string& name) const { return fields.count(name) != 0; }
    bool has_map(const std::string& name) const { return maps.count(name) != 0; }
};

struct FixtureSource {
    std::string name;
    std::string text;
};

/// Parses several fixture texts into one set. Declarations from all texts
/// are collected first, so blocks may use names declared in another file.
FixtureSet parse_fixtures(const std::vector<FixtureSource>& sources);

/// Loads every `*.pa` file in `dir`, in lexicographic order.
FixtureSet load_fixtures(const std::filesystem::path& dir);

/// $PHASE_ATLAS_FIXTURES if set, else the directory baked in at build time.
std::filesystem::path default_fixture_dir();

} // namespace phase_atlas
