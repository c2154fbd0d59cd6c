#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace avatar::ssl {

/// GCC-PHAT delay estimator for frames of a fixed length.
///
/// Frames are zero-padded to the next power of two >= 2N so the correlation is
/// linear rather than circular. The cross-spectrum is whitened bin by bin, but
/// bins whose magnitude falls below `kSpectralFloor` times the strongest bin
/// are dropped: a voiced source occupies only a handful of bins, and whitening
/// the noise-only bins to unit weight would bury its correlation peak.
///
/// The sign convention is that a positive delay means `y` lags `x`.
class GccPhat
{
public:
    static constexpr double kSpectralFloor = 1e-2;
    /// Minimum normalized correlation peak, in units of 1/sqrt(kept bins).
    static constexpr double kNoiseFloorSigmas = 3.0;

    explicit GccPhat(std::size_t frame_length);
    ~GccPhat();
    GccPhat(GccPhat&&) noexcept;
    GccPhat& operator=(GccPhat&&) noexcept;
    GccPhat(const GccPhat&) = delete;
    GccPhat& operator=(const GccPhat&) = delete;

    using Spectrum = std::vector<std::complex<double>>;

    [[nodiscard]] std::size_t frame_length() const;
    [[nodiscard]] std::size_t fft_length() const;

    [[nodiscard]] Spectrum spectrum(std::span<const double> samples) const;

    /// Delay of `y` relative to `x` in seconds, searched over |lag| <= max_delay
    /// and refined by a parabola through the integer peak and its neighbours.
    /// Throws NoPeak when the peak is not unique or sits below the noise floor.
    [[nodiscard]] double delay(const Spectrum& x, const Spectrum& y, double sample_rate, double max_delay) const;

private:
    struct Impl;
    std::unique_ptr<Impl> mImpl;
};

/// One-shot convenience over GccPhat. Requires equal lengths and
/// max_delay < frame duration / 2.
double gcc_phat_delay(std::span<const double> x, std::span<const double> y, double sample_rate, double max_delay);

}  // namespace avatar::ssl
