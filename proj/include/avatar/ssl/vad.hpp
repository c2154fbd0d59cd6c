#pragma once

#include "avatar/ssl/types.hpp"

namespace avatar::ssl {

inline constexpr double kDefaultVadThreshold = 1e-4;

/// Hysteresis carrier threaded through consecutive frames of one stream.
/// Activation needs energy above the threshold; once active, the stream stays
/// active until energy drops to half the threshold or below.
struct VadState
{
    bool active = false;
    double duration = 0.0;
};

double mean_square(const std::vector<double>& samples);

VadDecision detect_vad(const AudioFrame& frame, double threshold, VadState& state);

/// Single-frame decision with no history.
VadDecision detect_vad(const AudioFrame& frame, double threshold);

}  // namespace avatar::ssl
