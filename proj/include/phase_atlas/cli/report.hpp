#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "phase_atlas/vfield/fixture.hpp"

namespace phase_atlas {

enum class Status { pass, fail, warn };

std::string_view to_string(Status s);

struct Check {
    std::string name;
    Status status = Status::pass;
    std::string detail;
};

/// Machine-readable outcome of one command; ok() iff no check failed.
struct Report {
    std::string command;
    std::vector<Check> checks;
    double elapsed_ms = 0;
    nlohmann::json data = nlohmann::json::object();

    void add(std::string name, bool passed, std::string detail = {});
    void warn(std::string name, std::string detail);
    /// Appends another report's checks and stores its data under `key`.
    void merge(const Report& other, const std::string& key);

    bool ok() const;
    std::size_t count(Status s) const;
    nlohmann::json to_json() const;
};

/// Charts U1..U7 (round trip and holomorphy), the 56 transitions and a
/// {step, matched_golden} summary of the resolution replay.
Report verify_atlas(const FixtureSet& fixtures);
/// Every step against its golden, terminal charts, the blown-down system index.
Report verify_resolution(const FixtureSet& fixtures);
/// Accessible singular points against the fixture table.
Report verify_singularities(const FixtureSet& fixtures);
/// Invariance, the invariant family, decoupling, P3 index and reductions.
Report verify_symmetry(const FixtureSet& fixtures);
/// The four verifications above, run concurrently.
Report verify_all(const FixtureSet& fixtures);

Report derive_family(const FixtureSet& fixtures);
Report derive_p3_index(const FixtureSet& fixtures);
Report derive_reductions(const FixtureSet& fixtures);

/// Milliseconds spent in `f`, stored into the report it returns.
template <class F>
Report timed(F&& f);

} // namespace phase_atlas

#include <chrono>

namespace phase_atlas {

template <class F>
Report timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    Report r = f();
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace phase_atlas
