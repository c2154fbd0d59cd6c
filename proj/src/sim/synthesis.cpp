#include "avatar/sim/synthesis.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "avatar/ssl/doa.hpp"

namespace avatar::sim {

namespace {

constexpr double kVoiceGain = 0.1;
constexpr double kModulationRate = 4.0;  // Hz
constexpr double kModulationDepth = 0.5;
constexpr std::array kHarmonicGains{1.0, 0.7, 0.5};
constexpr double kFaceWidthAtOneMeter = 80.0;  // pixels

double fundamental(int attendee_id)
{
    const int slot = ((attendee_id % 6) + 6) % 6;
    return 120.0 + 20.0 * slot;
}

}  // namespace

double voice_sample(int attendee_id, double t)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double f0 = fundamental(attendee_id);
    const double phase0 = 0.7 * attendee_id;
    double tone = 0.0;
    for (std::size_t h = 0; h < kHarmonicGains.size(); ++h)
    {
        const double k = static_cast<double>(h + 1);
        tone += kHarmonicGains[h] * std::sin(two_pi * k * f0 * t + k * phase0);
    }
    const double envelope = 1.0 + kModulationDepth * std::sin(two_pi * kModulationRate * t + phase0);
    return kVoiceGain * envelope * tone;
}

double voice_reference_power()
{
    double harmonics = 0.0;
    for (double g : kHarmonicGains)
    {
        harmonics += g * g / 2.0;
    }
    const double envelope = 1.0 + kModulationDepth * kModulationDepth / 2.0;
    return kVoiceGain * kVoiceGain * harmonics * envelope;
}

ssl::AudioFrame synthesize_frame(const Scenario& scenario, Timestamp t, double length,
                                 const ssl::MicArrayGeometry& geometry, double sample_rate)
{
    if (!(length > 0.0) || !(sample_rate > 0.0))
    {
        throw std::invalid_argument("synthesize_frame: length and sample rate must be positive");
    }
    geometry.validate();

    const auto first = static_cast<std::int64_t>(std::llround(t.seconds() * sample_rate));
    const auto count = static_cast<std::size_t>(std::llround(length * sample_rate));
    const double noise_sigma = std::sqrt(voice_reference_power() / std::pow(10.0, scenario.noise_snr_db / 10.0));

    ssl::AudioFrame frame;
    frame.sample_rate = sample_rate;
    frame.start_time = t;
    frame.channels.assign(geometry.size(), std::vector<double>(count, 0.0));

    for (std::size_t m = 0; m < geometry.size(); ++m)
    {
        std::vector<double>& channel = frame.channels[m];
        for (const Attendee& a : scenario.attendees)
        {
            const double offset = ssl::arrival_offset(geometry, m, a.azimuth);
            const double gain = 1.0 / a.distance;
            for (std::size_t n = 0; n < count; ++n)
            {
                const double tn = static_cast<double>(first + static_cast<std::int64_t>(n)) / sample_rate;
                if (scenario.is_speaking(a.id, tn))
                {
                    channel[n] += gain * voice_sample(a.id, tn - offset);
                }
            }
        }

        std::seed_seq seq{static_cast<std::uint32_t>(scenario.seed), static_cast<std::uint32_t>(scenario.seed >> 32),
                          static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(first),
                          static_cast<std::uint32_t>(static_cast<std::uint64_t>(first) >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (double& s : channel)
        {
            s += noise(rng);
        }
    }
    return frame;
}

ssl::AudioFrame synthesize_session(const Scenario& scenario, const ssl::MicArrayGeometry& geometry,
                                   double sample_rate)
{
    return synthesize_frame(scenario, Timestamp(0.0), scenario.session_length(), geometry, sample_rate);
}

std::vector<attention::FaceObservation> project_faces(const Scenario& scenario, Angle heading,
                                                      const attention::CameraConfig& cam, Timestamp t)
{
    std::vector<attention::FaceObservation> faces;
    const double width = cam.frame_width;
    for (const Attendee& a : scenario.attendees)
    {
        if (!(angular_distance(heading, a.azimuth) < cam.horizontal_fov / 2.0))
        {
            continue;
        }
        const double x = width / 2.0 + signed_difference(heading, a.azimuth) / cam.horizontal_fov * width;
        faces.push_back({a.id, x, kFaceWidthAtOneMeter / a.distance, scenario.is_speaking(a.id, t.seconds())});
    }
    return faces;
}

std::vector<attention::FaceObservation> project_faces(const Scenario& scenario, Angle heading,
                                                      const attention::CameraConfig& cam, Timestamp t,
                                                      double error_probability, std::mt19937_64& rng)
{
    auto faces = project_faces(scenario, heading, cam, t);
    if (error_probability > 0.0)
    {
        std::bernoulli_distribution flip(error_probability);
        for (auto& f : faces)
        {
            if (flip(rng))
            {
                f.lips_moving = !f.lips_moving;
            }
        }
    }
    return faces;
}

}  // namespace avatar::sim
