#pragma once

#include <compare>
#include <span>

namespace avatar {

/// Azimuth in degrees, always normalized to [0, 360).
class Angle
{
public:
    constexpr Angle() = default;
    explicit Angle(double degrees) : mDegrees(normalize(degrees)) {}

    [[nodiscard]] double degrees() const { return mDegrees; }
    [[nodiscard]] double radians() const;

    Angle operator+(double delta) const { return Angle(mDegrees + delta); }
    Angle operator-(double delta) const { return Angle(mDegrees - delta); }
    Angle& operator+=(double delta) { return *this = *this + delta; }

    friend bool operator==(const Angle&, const Angle&) = default;

    /// Maps any finite value onto [0, 360).
    static double normalize(double degrees);

private:
    double mDegrees = 0.0;
};

/// Seconds since simulation start.
class Timestamp
{
public:
    constexpr Timestamp() = default;
    explicit Timestamp(double seconds);

    [[nodiscard]] double seconds() const { return mSeconds; }

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
    friend double operator-(Timestamp a, Timestamp b) { return a.mSeconds - b.mSeconds; }

private:
    double mSeconds = 0.0;
};

/// Wrap-aware distance in [0, 180].
double angular_distance(Angle a, Angle b);

/// Signed rotation in (-180, 180] that takes `from` onto `to`.
double signed_difference(Angle from, Angle to);

/// Vector-sum mean; throws DegenerateMean when the resultant is shorter than 1e-9.
Angle circular_mean(std::span<const Angle> angles);

/// Point on the shorter arc equidistant from a and b; DegenerateMean when antipodal.
Angle circular_midpoint(Angle a, Angle b);

}  // namespace avatar
