#include "avatar/ssl/vad.hpp"

#include <numeric>
#include <stdexcept>

namespace avatar::ssl {

namespace {
constexpr double kReleaseRatio = 0.5;
}

double mean_square(const std::vector<double>& samples)
{
    if (samples.empty())
    {
        return 0.0;
    }
    const double sum = std::transform_reduce(samples.begin(), samples.end(), samples.begin(), 0.0);
    return sum / static_cast<double>(samples.size());
}

VadDecision detect_vad(const AudioFrame& frame, double threshold, VadState& state)
{
    frame.validate();
    if (!(threshold > 0.0))
    {
        throw std::invalid_argument("VAD threshold must be positive");
    }
    const double energy = mean_square(frame.channels.front());
    const double gate = state.active ? threshold * kReleaseRatio : threshold;

    state.active = energy > gate;
    state.duration = state.active ? state.duration + frame.duration() : 0.0;
    return {state.active, energy, state.duration};
}

VadDecision detect_vad(const AudioFrame& frame, double threshold)
{
    VadState fresh;
    return detect_vad(frame, threshold, fresh);
}

}  // namespace avatar::ssl
