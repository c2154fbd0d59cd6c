#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "avatar/metrics.hpp"
#include "avatar/sim/simulator.hpp"

namespace avatar::cli {

/// Every tunable of the pipeline in one place. The JSON form is flat; each key
/// has a matching command-line flag with dashes in place of underscores.
struct CliConfig
{
    sim::SimConfig sim;  ///< includes the qualification rules, camera and mic geometry
    metrics::MetricTolerances tolerances;

    void validate() const;
};

/// Reads a flat JSON object. Unknown keys and wrong types throw
/// std::invalid_argument; the merged result is validated.
CliConfig config_from_json(const nlohmann::json& doc, CliConfig base = {});

nlohmann::ordered_json config_to_json(const CliConfig& config);

/// Throws std::runtime_error when the file cannot be read and
/// std::invalid_argument when its content is not a valid config.
nlohmann::json read_config_file(const std::filesystem::path& path);

}  // namespace avatar::cli
