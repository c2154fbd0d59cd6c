#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avatar/angle.hpp"

namespace avatar::sim {

struct Attendee
{
    int id = 0;
    Angle azimuth;
    double distance = 1.5;  ///< meters from the robot
};

/// One utterance, active on [start, end).
struct SpeechSegment
{
    int attendee_id = 0;
    double start = 0.0;
    double end = 0.0;
};

/// Scripted meeting: who sits where and who speaks when.
struct Scenario
{
    std::string name;
    std::vector<Attendee> attendees;
    std::vector<SpeechSegment> schedule;
    std::uint64_t seed = 0;
    double noise_snr_db = 30.0;     ///< acoustic mode
    double doa_noise_sigma = 0.0;   ///< event mode, degrees
    double initial_heading = 0.0;   ///< degrees
    std::optional<double> duration; ///< seconds; defaults to the last segment end + 5 s

    [[nodiscard]] double session_length() const;
    [[nodiscard]] const Attendee* find_attendee(int id) const;
    [[nodiscard]] bool is_speaking(int attendee_id, double t) const;

    /// Throws InvalidScenario on unknown ids, empty or overlapping segments, or bad noise values.
    void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

/// Parses and validates; throws InvalidScenario on malformed content and
/// std::runtime_error when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

struct GeneratorOptions
{
    int attendees = 3;
    std::uint64_t seed = 1;
    double duration = 60.0;
    double doa_noise_sigma = 1.0;
};

/// Attendees spread around the robot with jittered azimuths and a turn-taking
/// schedule of random utterance lengths and pauses.
Scenario generate_scenario(const GeneratorOptions& options);

}  // namespace avatar::sim
