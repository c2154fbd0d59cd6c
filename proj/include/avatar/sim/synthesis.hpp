#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "avatar/angle.hpp"
#include "avatar/attention.hpp"
#include "avatar/sim/scenario.hpp"
#include "avatar/ssl/types.hpp"

namespace avatar::sim {

/// Voiced source of one attendee at 1 m: a 4 Hz amplitude-modulated harmonic
/// tone whose fundamental depends on the attendee id.
double voice_sample(int attendee_id, double t);

/// Mean power of voice_sample, the reference for the scenario SNR.
double voice_reference_power();

/// Multichannel microphone signal over [t, t + length). Each active attendee
/// contributes its voice, scaled by 1/distance and delayed per microphone for
/// a far-field plane wave from its azimuth. Sensor noise is white Gaussian at
/// the scenario SNR and is a pure function of (seed, channel, sample index).
ssl::AudioFrame synthesize_frame(const Scenario& scenario, Timestamp t, double length,
                                 const ssl::MicArrayGeometry& geometry, double sample_rate);

/// The whole session as one frame starting at zero.
ssl::AudioFrame synthesize_session(const Scenario& scenario, const ssl::MicArrayGeometry& geometry,
                                   double sample_rate);

/// Face detections for attendees inside the camera's field of view. Boxes are
/// placed with the same linear pixel/angle mapping the controller inverts, and
/// widths shrink with distance. `lips_moving` follows the schedule.
std::vector<attention::FaceObservation> project_faces(const Scenario& scenario, Angle heading,
                                                      const attention::CameraConfig& cam, Timestamp t);

/// Same, with each lip flag flipped independently with `error_probability`.
std::vector<attention::FaceObservation> project_faces(const Scenario& scenario, Angle heading,
                                                      const attention::CameraConfig& cam, Timestamp t,
                                                      double error_probability, std::mt19937_64& rng);

}  // namespace avatar::sim
