#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "muskat/bounds.hpp"
#include "muskat/diagnostics.hpp"
#include "muskat/evolve.hpp"

namespace muskat {

/// Everything a harness invocation needs: the simulation setup plus output
/// routing, the modulus for the continuity-based checks, the RNG seed for
/// the random test-function suites, and the fault-injection hooks.
struct RunConfig {
    SimConfig sim;
    Modulus modulus;
    bool modulus_cap_auto = true;  // cap = 2B of the data when not set explicitly
    std::string output_dir = ".";
    std::uint64_t seed = 12345;
    double corrupt_bounds_factor = 1.0;  // test hook: scales the bound side of lemma checks
};

RunConfig default_config();

/// Strict parse: unknown keys are rejected with their path; missing keys
/// take documented defaults.
RunConfig parse_config_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& path);

/// The fully-defaulted configuration as JSON; parse_config_json of this is
/// the identity.
nlohmann::json effective_config(const RunConfig& cfg);

void write_csv(const std::string& path, const GridFunction& g);
GridFunction read_csv(const std::string& path);

void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows);
void write_events_json(const std::string& path, const EventLog& events);
void write_report_json(const std::string& path, const std::vector<CheckReport>& reports);
nlohmann::json reports_to_json(const std::vector<CheckReport>& reports);

/// 17-significant-digit decimal form (lossless for doubles).
std::string format_full(double v);

}  // namespace muskat
