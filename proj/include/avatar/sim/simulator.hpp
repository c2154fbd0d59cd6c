#pragma once

#include <string_view>

#include "avatar/attention.hpp"
#include "avatar/qualify.hpp"
#include "avatar/sim/scenario.hpp"
#include "avatar/sim/trace.hpp"
#include "avatar/ssl/types.hpp"
#include "avatar/ssl/vad.hpp"

namespace avatar::sim {

/// Event mode emits DOAs straight from the schedule; acoustic mode synthesizes
/// microphone audio and runs VAD and GCC-PHAT on it.
enum class SensingMode
{
    Event,
    Acoustic,
};

std::string_view to_string(SensingMode mode);
SensingMode sensing_mode_from_string(std::string_view name);

struct SimConfig
{
    SensingMode mode = SensingMode::Event;
    double dt = 0.05;                ///< tick length, seconds
    double max_turn_rate = 90.0;     ///< degrees per second
    double doa_period = 1.0;         ///< seconds between DOA estimates while someone speaks
    double analysis_window = 0.5;    ///< acoustic DOA frame length, seconds
    double sample_rate = 16000.0;
    double vad_threshold = ssl::kDefaultVadThreshold;
    double lip_error_probability = 0.0;
    attention::CameraConfig camera;
    ssl::MicArrayGeometry geometry = ssl::MicArrayGeometry::default_array();
    qualify::RuleConfig rules;

    void validate() const;
};

/// Runs a scenario through sensing, qualification, attention and heading
/// integration on a fixed tick. Deterministic for a given scenario and config.
Trace run(const Scenario& scenario, const SimConfig& config);

}  // namespace avatar::sim
