#pragma once

#include "avatar/ssl/types.hpp"
#include "avatar/ssl/vad.hpp"

namespace avatar::ssl {

/// Far-field delay of microphone j relative to microphone i for a source at
/// `azimuth`: (p_i - p_j) . u(azimuth) / c. Matches the sign convention of
/// gcc_phat_delay(channel i, channel j).
double far_field_delay(const MicArrayGeometry& geometry, std::size_t i, std::size_t j, Angle azimuth);

/// Arrival time at microphone `mic` relative to the array origin.
double arrival_offset(const MicArrayGeometry& geometry, std::size_t mic, Angle azimuth);

/// Azimuth from pairwise GCC-PHAT delays: the 1-degree grid point minimizing
/// the summed squared delay residual over all microphone pairs. Confidence is
/// 1 / (1 + rms residual in samples).
///
/// Throws NoVoiceActivity when the frame is not VAD-active at `vad_threshold`
/// and lets NoPeak from any pair propagate.
DoaEstimate estimate_doa(const AudioFrame& frame, const MicArrayGeometry& geometry,
                         double vad_threshold = kDefaultVadThreshold);

}  // namespace avatar::ssl
