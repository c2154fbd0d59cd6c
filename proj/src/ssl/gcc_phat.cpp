#include "avatar/ssl/gcc_phat.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "avatar/errors.hpp"

namespace avatar::ssl {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex mutex;
    return mutex;
}

struct FftwFree
{
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t count)
{
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (raw == nullptr)
    {
        throw std::bad_alloc();
    }
    return FftwBuffer<T>(raw);
}

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
    {
        p <<= 1;
    }
    return p;
}

constexpr double kTieTolerance = 1e-9;

}  // namespace

struct GccPhat::Impl
{
    std::size_t frame = 0;
    std::size_t nfft = 0;
    std::size_t bins = 0;
    FftwBuffer<double> real;
    FftwBuffer<fftw_complex> complex;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    // Guards the shared buffers so one engine may be used from several threads.
    std::mutex buffers;

    explicit Impl(std::size_t frame_length)
        : frame(frame_length),
          nfft(next_pow2(2 * frame_length)),
          bins(nfft / 2 + 1),
          real(fftw_alloc<double>(nfft)),
          complex(fftw_alloc<fftw_complex>(bins))
    {
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), real.get(), complex.get(), FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_1d(static_cast<int>(nfft), complex.get(), real.get(), FFTW_ESTIMATE);
        if (forward == nullptr || inverse == nullptr)
        {
            throw std::runtime_error("FFTW plan creation failed");
        }
    }

    ~Impl()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
    }
};

GccPhat::GccPhat(std::size_t frame_length)
{
    if (frame_length < 2)
    {
        throw std::invalid_argument("GCC-PHAT frame must hold at least two samples");
    }
    mImpl = std::make_unique<Impl>(frame_length);
}

GccPhat::~GccPhat() = default;
GccPhat::GccPhat(GccPhat&&) noexcept = default;
GccPhat& GccPhat::operator=(GccPhat&&) noexcept = default;

std::size_t GccPhat::frame_length() const { return mImpl->frame; }
std::size_t GccPhat::fft_length() const { return mImpl->nfft; }

GccPhat::Spectrum GccPhat::spectrum(std::span<const double> samples) const
{
    if (samples.size() != mImpl->frame)
    {
        throw std::invalid_argument("sample count does not match the GCC-PHAT frame length");
    }
    std::lock_guard lock(mImpl->buffers);
    std::fill_n(mImpl->real.get(), mImpl->nfft, 0.0);
    std::copy(samples.begin(), samples.end(), mImpl->real.get());
    fftw_execute(mImpl->forward);

    Spectrum out(mImpl->bins);
    for (std::size_t k = 0; k < mImpl->bins; ++k)
    {
        out[k] = {mImpl->complex[k][0], mImpl->complex[k][1]};
    }
    return out;
}

double GccPhat::delay(const Spectrum& x, const Spectrum& y, double sample_rate, double max_delay) const
{
    const std::size_t bins = mImpl->bins;
    const std::size_t nfft = mImpl->nfft;
    if (x.size() != bins || y.size() != bins)
    {
        throw std::invalid_argument("spectrum size does not match the GCC-PHAT engine");
    }
    if (!(sample_rate > 0.0) || !(max_delay >= 0.0))
    {
        throw std::invalid_argument("sample rate must be positive and max delay non-negative");
    }
    const double frame_duration = static_cast<double>(mImpl->frame) / sample_rate;
    if (!(max_delay < frame_duration / 2.0))
    {
        throw std::invalid_argument("max delay must be shorter than half the frame");
    }

    std::vector<std::complex<double>> cross(bins);
    double peak_magnitude = 0.0;
    for (std::size_t k = 0; k < bins; ++k)
    {
        cross[k] = y[k] * std::conj(x[k]);
        peak_magnitude = std::max(peak_magnitude, std::abs(cross[k]));
    }
    if (!std::isfinite(peak_magnitude))
    {
        throw std::invalid_argument("cross-spectrum contains non-finite values");
    }
    if (peak_magnitude <= 0.0)
    {
        throw NoPeak("cross-spectrum is identically zero");
    }

    // Weight of the whitened spectrum summed over both halves; the value of
    // a perfectly coherent correlation peak before normalization.
    const double floor = kSpectralFloor * peak_magnitude;
    double kept_weight = 0.0;
    std::lock_guard lock(mImpl->buffers);
    for (std::size_t k = 0; k < bins; ++k)
    {
        const double magnitude = std::abs(cross[k]);
        if (magnitude > floor)
        {
            const std::complex<double> whitened = cross[k] / magnitude;
            mImpl->complex[k][0] = whitened.real();
            mImpl->complex[k][1] = whitened.imag();
            kept_weight += (k == 0 || k == bins - 1) ? 1.0 : 2.0;
        }
        else
        {
            mImpl->complex[k][0] = 0.0;
            mImpl->complex[k][1] = 0.0;
        }
    }
    fftw_execute(mImpl->inverse);

    const auto n = static_cast<long>(nfft);
    auto corr = [&](long lag) { return mImpl->real[static_cast<std::size_t>(((lag % n) + n) % n)] / kept_weight; };

    const long max_lag = static_cast<long>(std::floor(max_delay * sample_rate));
    long best = -max_lag;
    double best_value = corr(best);
    for (long lag = -max_lag + 1; lag <= max_lag; ++lag)
    {
        const double value = corr(lag);
        if (value > best_value)
        {
            best = lag;
            best_value = value;
        }
    }

    const double noise_floor = kNoiseFloorSigmas / std::sqrt(kept_weight);
    if (!(best_value > noise_floor))
    {
        throw NoPeak("correlation peak does not clear the noise floor");
    }
    for (long lag = -max_lag; lag <= max_lag; ++lag)
    {
        if (std::abs(lag - best) >= 2 && corr(lag) >= best_value - kTieTolerance)
        {
            throw NoPeak("correlation peak is not unique");
        }
    }

    const double before = corr(best - 1);
    const double after = corr(best + 1);
    const double curvature = before - 2.0 * best_value + after;
    double refinement = 0.0;
    if (curvature < 0.0)
    {
        refinement = std::clamp(0.5 * (before - after) / curvature, -0.5, 0.5);
    }
    return (static_cast<double>(best) + refinement) / sample_rate;
}

double gcc_phat_delay(std::span<const double> x, std::span<const double> y, double sample_rate, double max_delay)
{
    if (x.size() != y.size())
    {
        throw std::invalid_argument("GCC-PHAT inputs must have equal length");
    }
    GccPhat engine(x.size());
    return engine.delay(engine.spectrum(x), engine.spectrum(y), sample_rate, max_delay);
}

}  // namespace avatar::ssl
