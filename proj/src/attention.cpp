#include "avatar/attention.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "avatar/errors.hpp"

namespace avatar::attention {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool arrived(const RobotState& state, Action a)
{
    return angular_distance(state.heading, *state.target(a)) <= kArrivalTolerance;
}

StepResult engage(RobotState state, Action a, Angle target, Timestamp at)
{
    state.engage(a, target);
    return {std::move(state), TurnCommand{target, a, at}};
}

StepResult on_qualified(RobotState state, const qualify::QualifiedDoa& doa)
{
    if (doa.kind == qualify::TurnKind::Direct)
    {
        if (state.f(Action::Theta2))
        {
            state.pending = doa;
            return {std::move(state), std::nullopt};
        }
        state.pending.reset();
        return engage(std::move(state), Action::Theta1, doa.angle, doa.timestamp);
    }
    state.pending.reset();
    return engage(std::move(state), Action::Theta3, doa.angle, doa.timestamp);
}

/// Visual attention from an idle state (no raised flag).
StepResult look(RobotState state, const FaceFrame& frame, const CameraConfig& cam)
{
    if (frame.faces.size() == 1)
    {
        const double offset = centering_offset(frame.faces.front(), cam);
        if (offset != 0.0)
        {
            const Angle target = state.heading + offset;
            return engage(std::move(state), Action::Theta2, target, frame.time);
        }
    }
    else if (frame.faces.size() >= 2)
    {
        const std::optional<double> offset = select_speaker(frame.faces, cam);
        if (offset && *offset != 0.0)
        {
            const Angle target = state.heading + *offset;
            return engage(std::move(state), Action::Theta4, target, frame.time);
        }
    }
    return {std::move(state), std::nullopt};
}

StepResult on_faces(RobotState state, const FaceFrame& frame, const CameraConfig& cam)
{
    const std::optional<Action> active = state.active();
    if (active)
    {
        if (!arrived(state, *active))
        {
            return {std::move(state), std::nullopt};
        }
        state.clear();
        if (*active == Action::Theta2 && state.pending)
        {
            const qualify::QualifiedDoa deferred = *state.pending;
            state.pending.reset();
            return engage(std::move(state), Action::Theta1, deferred.angle, frame.time);
        }
    }
    return look(std::move(state), frame, cam);
}

}  // namespace

std::string_view to_string(Action action)
{
    switch (action)
    {
        case Action::Theta1:
            return "Theta1";
        case Action::Theta2:
            return "Theta2";
        case Action::Theta3:
            return "Theta3";
        case Action::Theta4:
            return "Theta4";
    }
    return "?";
}

Action action_from_string(std::string_view name)
{
    for (Action a : kActions)
    {
        if (to_string(a) == name)
        {
            return a;
        }
    }
    throw std::invalid_argument("unknown turn reason '" + std::string(name) + "'");
}

int RobotState::raised_flags() const
{
    int count = 0;
    for (bool f : flag)
    {
        count += f ? 1 : 0;
    }
    return count;
}

std::optional<Action> RobotState::active() const
{
    if (raised_flags() != 1)
    {
        return std::nullopt;
    }
    for (Action a : kActions)
    {
        if (f(a))
        {
            return a;
        }
    }
    return std::nullopt;
}

void RobotState::engage(Action a, Angle target)
{
    clear();
    flag[static_cast<std::size_t>(a)] = true;
    theta[static_cast<std::size_t>(a)] = target;
}

void RobotState::clear()
{
    flag.fill(false);
    theta.fill(std::nullopt);
}

void RobotState::validate() const
{
    if (raised_flags() > 1)
    {
        throw InvalidState("more than one control flag raised");
    }
    for (std::size_t i = 0; i < flag.size(); ++i)
    {
        if (flag[i] != theta[i].has_value())
        {
            throw InvalidState("theta" + std::to_string(i + 1) + " validity disagrees with f" + std::to_string(i + 1));
        }
    }
}

void CameraConfig::validate() const
{
    if (frame_width <= 0)
    {
        throw std::invalid_argument("frame width must be positive");
    }
    if (!(horizontal_fov > 0.0 && horizontal_fov < 180.0))
    {
        throw std::invalid_argument("horizontal FOV must lie in (0, 180) degrees");
    }
    if (!(center_tolerance >= 0.0 && center_tolerance < frame_width / 2.0))
    {
        throw std::invalid_argument("center tolerance must lie in [0, frame_width / 2)");
    }
}

double CameraConfig::tolerance_degrees() const { return center_tolerance / frame_width * horizontal_fov; }

double centering_offset(const FaceObservation& face, const CameraConfig& cam)
{
    if (!(face.box_center_x >= 0.0 && face.box_center_x < cam.frame_width))
    {
        throw std::invalid_argument("face center lies outside the frame");
    }
    const double pixels = face.box_center_x - cam.frame_width / 2.0;
    if (std::abs(pixels) <= cam.center_tolerance)
    {
        return 0.0;
    }
    return pixels / cam.frame_width * cam.horizontal_fov;
}

std::optional<double> select_speaker(const std::vector<FaceObservation>& faces, const CameraConfig& cam)
{
    double sum_x = 0.0;
    int speaking = 0;
    for (const FaceObservation& face : faces)
    {
        if (face.lips_moving)
        {
            sum_x += face.box_center_x;
            ++speaking;
        }
    }
    if (speaking == 0)
    {
        return std::nullopt;
    }
    FaceObservation midpoint;
    midpoint.box_center_x = sum_x / speaking;
    return centering_offset(midpoint, cam);
}

StepResult step(const RobotState& state, const Event& event, const CameraConfig& cam)
{
    state.validate();
    return std::visit(Overloaded{
                          [&](const qualify::QualifiedDoa& doa) { return on_qualified(state, doa); },
                          [&](const FaceFrame& frame) { return on_faces(state, frame, cam); },
                          [&](const Silence&) {
                              RobotState quiet = state;
                              quiet.clear();
                              quiet.pending.reset();
                              return StepResult{std::move(quiet), std::nullopt};
                          },
                      },
                      event);
}

}  // namespace avatar::attention
