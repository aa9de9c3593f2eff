#pragma once

// Scenario files are JSON in base SI units:
//
//   {
//     "omega": 2.2e6,
//     "transmitter": {"v_tx_mag": 35.35, "v_tx_phase": 0.0, "r_tx": 0.35, "l_tx": 6.35e-6},
//     "receivers": [{"r": 0.15, "l": 0.85e-6, "h": 2.3e-6,
//                    "x_min": 0.01, "x_max": 100, "p_min": 250, "x_nominal": 7.5}]
//   }
//
// v_tx_phase and x_nominal are optional.

#include "mrc/circuit.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mrc {

/// Parse or validation failure; what() starts with the source and field path.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string source, std::string field, const std::string& message);

    const std::string& source() const { return source_; }
    const std::string& field() const { return field_; }

private:
    std::string source_;
    std::string field_;
};

SystemScenario parse_scenario(std::string_view text, std::string_view source = "<string>");

std::string serialize_scenario(const SystemScenario& scenario);

/// Reads a scenario file. A path that does not exist but names a bundled
/// scenario ("paper-fig2", "paper-fig3") resolves to the bundled copy.
SystemScenario load_scenario(const std::filesystem::path& path);

/// Throws ScenarioError for unknown names.
SystemScenario bundled_scenario(std::string_view name);

std::vector<std::string> bundled_scenario_names();

}  // namespace mrc
