#include "avatar/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace avatar::cli {

namespace {

using nlohmann::json;

double number(const json& value, const std::string& key)
{
    if (!value.is_number())
    {
        throw std::invalid_argument("config key '" + key + "' must be a number");
    }
    return value.get<double>();
}

int integer(const json& value, const std::string& key)
{
    if (!value.is_number_integer())
    {
        throw std::invalid_argument("config key '" + key + "' must be an integer");
    }
    return value.get<int>();
}

std::string text(const json& value, const std::string& key)
{
    if (!value.is_string())
    {
        throw std::invalid_argument("config key '" + key + "' must be a string");
    }
    return value.get<std::string>();
}

qualify::GapReference gap_reference_from_string(const std::string& name)
{
    if (name == "raw")
    {
        return qualify::GapReference::RawDoa;
    }
    if (name == "qualified")
    {
        return qualify::GapReference::QualifiedDoa;
    }
    throw std::invalid_argument("gap_reference must be 'raw' or 'qualified'");
}

using Setter = std::function<void(CliConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table{
        {"gap_threshold", [](CliConfig& c, const json& v, const std::string& k) { c.sim.rules.gap_threshold = number(v, k); }},
        {"angle_threshold", [](CliConfig& c, const json& v, const std::string& k) { c.sim.rules.angle_threshold = number(v, k); }},
        {"speech_activity_min",
         [](CliConfig& c, const json& v, const std::string& k) { c.sim.rules.speech_activity_min = number(v, k); }},
        {"cluster_join_threshold",
         [](CliConfig& c, const json& v, const std::string& k) { c.sim.rules.cluster_join_threshold = number(v, k); }},
        {"gap_reference",
         [](CliConfig& c, const json& v, const std::string& k) {
             c.sim.rules.gap_reference = gap_reference_from_string(text(v, k));
         }},
        {"mode",
         [](CliConfig& c, const json& v, const std::string& k) { c.sim.mode = sim::sensing_mode_from_string(text(v, k)); }},
        {"dt", [](CliConfig& c, const json& v, const std::string& k) { c.sim.dt = number(v, k); }},
        {"max_turn_rate", [](CliConfig& c, const json& v, const std::string& k) { c.sim.max_turn_rate = number(v, k); }},
        {"doa_period", [](CliConfig& c, const json& v, const std::string& k) { c.sim.doa_period = number(v, k); }},
        {"analysis_window", [](CliConfig& c, const json& v, const std::string& k) { c.sim.analysis_window = number(v, k); }},
        {"sample_rate", [](CliConfig& c, const json& v, const std::string& k) { c.sim.sample_rate = number(v, k); }},
        {"vad_threshold", [](CliConfig& c, const json& v, const std::string& k) { c.sim.vad_threshold = number(v, k); }},
        {"lip_error_probability",
         [](CliConfig& c, const json& v, const std::string& k) { c.sim.lip_error_probability = number(v, k); }},
        {"frame_width", [](CliConfig& c, const json& v, const std::string& k) { c.sim.camera.frame_width = integer(v, k); }},
        {"fov", [](CliConfig& c, const json& v, const std::string& k) { c.sim.camera.horizontal_fov = number(v, k); }},
        {"center_tolerance",
         [](CliConfig& c, const json& v, const std::string& k) { c.sim.camera.center_tolerance = number(v, k); }},
        {"mic_count",
         [](CliConfig& c, const json& v, const std::string& k) {
             const int count = integer(v, k);
             if (count < 2)
             {
                 throw std::invalid_argument("mic_count must be at least 2");
             }
             const double radius = std::hypot(c.sim.geometry.mic_positions.front().x, c.sim.geometry.mic_positions.front().y);
             c.sim.geometry = ssl::MicArrayGeometry::circular(static_cast<std::size_t>(count), radius,
                                                              c.sim.geometry.speed_of_sound);
         }},
        {"mic_radius",
         [](CliConfig& c, const json& v, const std::string& k) {
             c.sim.geometry = ssl::MicArrayGeometry::circular(c.sim.geometry.size(), number(v, k),
                                                              c.sim.geometry.speed_of_sound);
         }},
        {"mic_positions",
         [](CliConfig& c, const json& v, const std::string& k) {
             if (!v.is_array())
             {
                 throw std::invalid_argument("config key '" + k + "' must be an array of [x, y] pairs");
             }
             std::vector<ssl::MicPosition> positions;
             for (const json& p : v)
             {
                 if (!p.is_array() || p.size() != 2)
                 {
                     throw std::invalid_argument("config key '" + k + "' must be an array of [x, y] pairs");
                 }
                 positions.push_back({number(p[0], k), number(p[1], k)});
             }
             c.sim.geometry.mic_positions = std::move(positions);
         }},
        {"speed_of_sound", [](CliConfig& c, const json& v, const std::string& k) { c.sim.geometry.speed_of_sound = number(v, k); }},
        {"heading_tolerance",
         [](CliConfig& c, const json& v, const std::string& k) { c.tolerances.heading_tolerance = number(v, k); }},
        {"latency", [](CliConfig& c, const json& v, const std::string& k) { c.tolerances.latency = number(v, k); }},
        {"missed_turn_angle",
         [](CliConfig& c, const json& v, const std::string& k) { c.tolerances.angle_threshold = number(v, k); }},
    };
    return table;
}

// Geometry keys interact, so they are applied in this order regardless of
// their order in the document.
constexpr std::array kOrderedKeys{"speed_of_sound", "mic_radius", "mic_count", "mic_positions"};

}  // namespace

void CliConfig::validate() const
{
    sim.validate();
    tolerances.validate();
}

CliConfig config_from_json(const nlohmann::json& doc, CliConfig base)
{
    if (!doc.is_object())
    {
        throw std::invalid_argument("config must be a JSON object");
    }
    const auto& table = setters();
    for (const auto& [key, value] : doc.items())
    {
        if (!table.contains(key))
        {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    for (const auto& [key, value] : doc.items())
    {
        if (std::find(kOrderedKeys.begin(), kOrderedKeys.end(), key) == kOrderedKeys.end())
        {
            table.at(key)(base, value, key);
        }
    }
    for (const char* key : kOrderedKeys)
    {
        if (doc.contains(key))
        {
            table.at(key)(base, doc.at(key), key);
        }
    }
    base.validate();
    return base;
}

nlohmann::ordered_json config_to_json(const CliConfig& c)
{
    nlohmann::ordered_json doc;
    doc["gap_threshold"] = c.sim.rules.gap_threshold;
    doc["angle_threshold"] = c.sim.rules.angle_threshold;
    doc["speech_activity_min"] = c.sim.rules.speech_activity_min;
    doc["cluster_join_threshold"] = c.sim.rules.cluster_join_threshold;
    doc["gap_reference"] = c.sim.rules.gap_reference == qualify::GapReference::RawDoa ? "raw" : "qualified";
    doc["mode"] = sim::to_string(c.sim.mode);
    doc["dt"] = c.sim.dt;
    doc["max_turn_rate"] = c.sim.max_turn_rate;
    doc["doa_period"] = c.sim.doa_period;
    doc["analysis_window"] = c.sim.analysis_window;
    doc["sample_rate"] = c.sim.sample_rate;
    doc["vad_threshold"] = c.sim.vad_threshold;
    doc["lip_error_probability"] = c.sim.lip_error_probability;
    doc["frame_width"] = c.sim.camera.frame_width;
    doc["fov"] = c.sim.camera.horizontal_fov;
    doc["center_tolerance"] = c.sim.camera.center_tolerance;
    doc["mic_positions"] = nlohmann::ordered_json::array();
    for (const auto& p : c.sim.geometry.mic_positions)
    {
        doc["mic_positions"].push_back({p.x, p.y});
    }
    doc["speed_of_sound"] = c.sim.geometry.speed_of_sound;
    doc["heading_tolerance"] = c.tolerances.heading_tolerance;
    doc["latency"] = c.tolerances.latency;
    doc["missed_turn_angle"] = c.tolerances.angle_threshold;
    return doc;
}

nlohmann::json read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config " + path.string());
    }
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw std::invalid_argument(std::string("config ") + path.string() + ": " + e.what());
    }
}

}  // namespace avatar::cli
