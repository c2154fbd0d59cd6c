#include "avatar/angle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "avatar/errors.hpp"

namespace avatar {

namespace {
constexpr double kDegenerateResultant = 1e-9;
constexpr double kDegToRad = std::numbers::pi / 180.0;
}  // namespace

double Angle::normalize(double degrees)
{
    if (!std::isfinite(degrees))
    {
        throw std::invalid_argument("angle must be finite");
    }
    double wrapped = std::fmod(degrees, 360.0);
    if (wrapped < 0.0)
    {
        wrapped += 360.0;
    }
    // fmod of a tiny negative value can round back up to exactly 360.
    return wrapped >= 360.0 ? 0.0 : wrapped;
}

double Angle::radians() const { return mDegrees * kDegToRad; }

Timestamp::Timestamp(double seconds) : mSeconds(seconds)
{
    if (!(seconds >= 0.0) || !std::isfinite(seconds))
    {
        throw std::invalid_argument("timestamp must be a non-negative finite number of seconds");
    }
}

double angular_distance(Angle a, Angle b)
{
    const double diff = std::abs(a.degrees() - b.degrees());
    return std::min(diff, 360.0 - diff);
}

double signed_difference(Angle from, Angle to)
{
    double diff = to.degrees() - from.degrees();
    if (diff > 180.0)
    {
        diff -= 360.0;
    }
    else if (diff <= -180.0)
    {
        diff += 360.0;
    }
    return diff;
}

Angle circular_mean(std::span<const Angle> angles)
{
    if (angles.empty())
    {
        throw std::invalid_argument("circular_mean of an empty list");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const Angle& a : angles)
    {
        sx += std::cos(a.radians());
        sy += std::sin(a.radians());
    }
    if (std::hypot(sx, sy) <= kDegenerateResultant)
    {
        throw DegenerateMean("circular mean resultant vanishes");
    }
    return Angle(std::atan2(sy, sx) / kDegToRad);
}

Angle circular_midpoint(Angle a, Angle b)
{
    const double diff = signed_difference(a, b);
    if (std::abs(diff) >= 180.0)
    {
        throw DegenerateMean("midpoint of antipodal angles is undefined");
    }
    return a + diff / 2.0;
}

}  // namespace avatar
