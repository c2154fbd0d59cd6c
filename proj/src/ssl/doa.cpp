#include "avatar/ssl/doa.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "avatar/errors.hpp"
#include "avatar/ssl/gcc_phat.hpp"

namespace avatar::ssl {

namespace {
constexpr int kGridPoints = 360;
}

MicArrayGeometry MicArrayGeometry::circular(std::size_t count, double radius, double speed_of_sound)
{
    MicArrayGeometry geometry;
    geometry.speed_of_sound = speed_of_sound;
    for (std::size_t m = 0; m < count; ++m)
    {
        const Angle at(360.0 * static_cast<double>(m) / static_cast<double>(count));
        geometry.mic_positions.push_back({radius * std::cos(at.radians()), radius * std::sin(at.radians())});
    }
    return geometry;
}

MicArrayGeometry MicArrayGeometry::default_array() { return circular(4, 0.032); }

void MicArrayGeometry::validate() const
{
    if (mic_positions.size() < 2)
    {
        throw std::invalid_argument("microphone array needs at least two microphones");
    }
    if (!(speed_of_sound > 0.0))
    {
        throw std::invalid_argument("speed of sound must be positive");
    }
    for (std::size_t i = 0; i < mic_positions.size(); ++i)
    {
        for (std::size_t j = i + 1; j < mic_positions.size(); ++j)
        {
            const double d = std::hypot(mic_positions[i].x - mic_positions[j].x, mic_positions[i].y - mic_positions[j].y);
            if (d <= 0.0)
            {
                throw std::invalid_argument("microphone positions must be distinct");
            }
            if (d > 0.5)
            {
                throw std::invalid_argument("microphone spacing exceeds 0.5 m");
            }
        }
    }
}

void AudioFrame::validate() const
{
    if (channels.empty())
    {
        throw std::invalid_argument("audio frame has no channels");
    }
    if (!(sample_rate > 0.0))
    {
        throw std::invalid_argument("sample rate must be positive");
    }
    for (const auto& ch : channels)
    {
        if (ch.size() != channels.front().size())
        {
            throw std::invalid_argument("audio channels differ in length");
        }
    }
    if (length() < kMinLength)
    {
        throw std::invalid_argument("audio frame shorter than 256 samples");
    }
}

double arrival_offset(const MicArrayGeometry& geometry, std::size_t mic, Angle azimuth)
{
    const MicPosition& p = geometry.mic_positions.at(mic);
    return -(p.x * std::cos(azimuth.radians()) + p.y * std::sin(azimuth.radians())) / geometry.speed_of_sound;
}

double far_field_delay(const MicArrayGeometry& geometry, std::size_t i, std::size_t j, Angle azimuth)
{
    return arrival_offset(geometry, j, azimuth) - arrival_offset(geometry, i, azimuth);
}

DoaEstimate estimate_doa(const AudioFrame& frame, const MicArrayGeometry& geometry, double vad_threshold)
{
    frame.validate();
    geometry.validate();
    if (frame.channels.size() != geometry.size())
    {
        throw std::invalid_argument("channel count does not match the microphone geometry");
    }
    if (!detect_vad(frame, vad_threshold).active)
    {
        throw NoVoiceActivity("no voice activity in frame");
    }

    const GccPhat engine(frame.length());
    std::vector<GccPhat::Spectrum> spectra;
    spectra.reserve(frame.channels.size());
    for (const auto& channel : frame.channels)
    {
        spectra.push_back(engine.spectrum(channel));
    }

    struct PairDelay
    {
        std::size_t i;
        std::size_t j;
        double measured;
    };
    std::vector<PairDelay> pairs;
    for (std::size_t i = 0; i < geometry.size(); ++i)
    {
        for (std::size_t j = i + 1; j < geometry.size(); ++j)
        {
            const MicPosition& a = geometry.mic_positions[i];
            const MicPosition& b = geometry.mic_positions[j];
            const double max_delay = std::hypot(a.x - b.x, a.y - b.y) / geometry.speed_of_sound + 1.0 / frame.sample_rate;
            pairs.push_back({i, j, engine.delay(spectra[i], spectra[j], frame.sample_rate, max_delay)});
        }
    }

    int best_degree = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int degree = 0; degree < kGridPoints; ++degree)
    {
        const Angle candidate(degree);
        double residual = 0.0;
        for (const PairDelay& p : pairs)
        {
            const double e = p.measured - far_field_delay(geometry, p.i, p.j, candidate);
            residual += e * e;
        }
        if (residual < best_residual)
        {
            best_residual = residual;
            best_degree = degree;
        }
    }

    const double rms_samples = std::sqrt(best_residual / static_cast<double>(pairs.size())) * frame.sample_rate;
    return {Angle(best_degree), frame.start_time, 1.0 / (1.0 + rms_samples)};
}

}  // namespace avatar::ssl
