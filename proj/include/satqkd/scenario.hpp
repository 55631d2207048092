#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "satqkd/bb84.hpp"
#include "satqkd/e91.hpp"
#include "satqkd/link.hpp"

namespace satqkd::scenario {

using Json = nlohmann::ordered_json;

enum class ScenarioKind { budget, bb84, e91, sweep };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view name);

struct ScenarioConfig {
    link::LinkConfig link;
    bb84::Bb84Config bb84;
    e91::E91Config e91;
    std::vector<double> sweep_altitudes_m{400e3, 500e3, 600e3, 750e3};
    std::uint64_t seed = 1;
    ScenarioKind scenario = ScenarioKind::budget;
    std::filesystem::path output_dir = "out";

    /// Validates every section; throws ConfigError with the dotted field path.
    void validate() const;
};

/// Parses a JSON document. Unknown keys are rejected, missing keys keep
/// their defaults, and blank text yields the default config. Syntax errors
/// are reported as ConfigError with "<source>:<line>:<column>".
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");

ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config; parse_config(to_json(c).dump()) reproduces c.
Json to_json(const ScenarioConfig& config);

/// budget.json document: channels and totals at six significant digits,
/// the scintillation range, calibration constants and model choices.
Json budget_to_json(const link::LossBudget& low, const link::LossBudget& high,
                    const link::LinkModel& model, const bb84::Bb84Config& bb84);

/// Full-precision form; budget_from_json(budget_entries_to_json(b)) == b bitwise.
Json budget_entries_to_json(const link::LossBudget& budget);
link::LossBudget budget_from_json(const Json& doc);

/// Two-column zenith table with the scintillation entry at the lowest and
/// highest configured percentile.
std::string format_budget_table(const link::LossBudget& low, const link::LossBudget& high);

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// Writes the scenario artifacts and config_echo.json into output_dir.
RunReport run(const ScenarioConfig& config);

/// {"error": {"type", "message", "field"|"channel"}} for an exception.
Json error_to_json(const std::exception& e);

}  // namespace satqkd::scenario
