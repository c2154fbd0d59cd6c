#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "avatar/angle.hpp"
#include "avatar/qualify.hpp"

namespace avatar::attention {

/// The four attention actions. Each owns one target heading (theta) and one
/// validity flag (f) in the robot state:
///   Theta1 - turn to a directly qualified DOA
///   Theta2 - center a single detected face
///   Theta3 - turn to a neutral point or a cluster average
///   Theta4 - center the speaking face(s) among several
enum class Action
{
    Theta1 = 0,
    Theta2 = 1,
    Theta3 = 2,
    Theta4 = 3,
};

inline constexpr std::array kActions{Action::Theta1, Action::Theta2, Action::Theta3, Action::Theta4};

std::string_view to_string(Action action);
Action action_from_string(std::string_view name);

/// Heading within this many degrees of a target counts as arrived.
inline constexpr double kArrivalTolerance = 1e-6;

struct RobotState
{
    Angle heading;
    std::array<std::optional<Angle>, 4> theta;
    std::array<bool, 4> flag{};
    /// Direct DOA deferred while a face is being centered.
    std::optional<qualify::QualifiedDoa> pending;

    [[nodiscard]] bool f(Action a) const { return flag[static_cast<std::size_t>(a)]; }
    [[nodiscard]] const std::optional<Angle>& target(Action a) const { return theta[static_cast<std::size_t>(a)]; }
    [[nodiscard]] int raised_flags() const;
    /// The raised action, if exactly one flag is up.
    [[nodiscard]] std::optional<Action> active() const;

    /// Raises `a` with `target`, clearing every other flag and theta.
    void engage(Action a, Angle target);
    void clear();

    /// Throws InvalidState on more than one raised flag or a flag/theta mismatch.
    void validate() const;
};

struct FaceObservation
{
    int face_id = 0;
    double box_center_x = 0.0;  ///< pixels
    double box_width = 1.0;     ///< pixels
    bool lips_moving = false;
};

struct CameraConfig
{
    int frame_width = 640;          ///< pixels
    double horizontal_fov = 60.0;   ///< degrees
    double center_tolerance = 5.0;  ///< pixels

    void validate() const;
    /// Center tolerance expressed as a rotation.
    [[nodiscard]] double tolerance_degrees() const;
};

struct TurnCommand
{
    Angle target;
    Action reason = Action::Theta1;
    Timestamp issued_at;
};

struct FaceFrame
{
    Timestamp time;
    std::vector<FaceObservation> faces;
};

struct Silence
{
    Timestamp time;
};

using Event = std::variant<qualify::QualifiedDoa, FaceFrame, Silence>;

/// Signed rotation that brings `face` to the image center, linear in pixel
/// offset: (x - W/2) / W * FOV. Zero inside the center tolerance.
double centering_offset(const FaceObservation& face, const CameraConfig& cam);

/// Offset toward the speaking face, or toward the pixel midpoint of all
/// speaking faces when several move their lips. Empty when nobody speaks.
std::optional<double> select_speaker(const std::vector<FaceObservation>& faces, const CameraConfig& cam);

struct StepResult
{
    RobotState state;
    std::optional<TurnCommand> command;
};

/// One transition of the attention state machine.
///
/// Qualified DOAs engage Theta1 (Direct) or Theta3 (Neutral, ClusterAverage).
/// A Direct DOA that arrives while a face is being centered waits in `pending`
/// until that rotation completes. Face frames are ignored while a rotation is
/// under way; once the heading reaches the active target, the action completes
/// and the visual logic runs: one off-center face engages Theta2, several faces
/// with an off-center speaking target engage Theta4. Silence clears everything.
StepResult step(const RobotState& state, const Event& event, const CameraConfig& cam);

}  // namespace avatar::attention
