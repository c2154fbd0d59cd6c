#pragma once

#include <cstddef>
#include <vector>

#include "avatar/angle.hpp"

namespace avatar::ssl {

struct MicPosition
{
    double x = 0.0;  ///< meters
    double y = 0.0;  ///< meters
};

struct MicArrayGeometry
{
    std::vector<MicPosition> mic_positions;
    double speed_of_sound = 343.0;  ///< m/s

    /// `count` microphones evenly spaced on a circle, the first on the +x axis.
    static MicArrayGeometry circular(std::size_t count, double radius, double speed_of_sound = 343.0);

    /// Four microphones on a 32 mm radius circle.
    static MicArrayGeometry default_array();

    [[nodiscard]] std::size_t size() const { return mic_positions.size(); }

    /// Throws std::invalid_argument unless there are >= 2 distinct mics no more than 0.5 m apart.
    void validate() const;
};

struct AudioFrame
{
    std::vector<std::vector<double>> channels;
    double sample_rate = 16000.0;
    Timestamp start_time;

    static constexpr std::size_t kMinLength = 256;

    [[nodiscard]] std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
    [[nodiscard]] double duration() const { return static_cast<double>(length()) / sample_rate; }

    void validate() const;
};

struct VadDecision
{
    bool active = false;
    double energy = 0.0;           ///< mean-square amplitude of channel 0
    double duration_so_far = 0.0;  ///< seconds of contiguous activity, 0 when inactive
};

struct DoaEstimate
{
    Angle angle;
    Timestamp timestamp;
    double confidence = 1.0;
};

}  // namespace avatar::ssl
