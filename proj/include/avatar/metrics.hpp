#pragma once

#include <array>

#include <nlohmann/json.hpp>

#include "avatar/sim/scenario.hpp"
#include "avatar/sim/trace.hpp"

namespace avatar::metrics {

struct MetricTolerances
{
    double heading_tolerance = 10.0;  ///< degrees; a settled heading further off is inaccurate
    double latency = 2.0;             ///< seconds allowed between speech and a reaction
    double angle_threshold = 5.0;     ///< degrees; smaller offsets need no turn

    void validate() const;
};

struct Count
{
    int errors = 0;
    int opportunities = 0;

    friend bool operator==(const Count&, const Count&) = default;
};

/// Error tallies for the five experience parameters, each with its denominator.
struct EventCounts
{
    Count unnecessary_turns;   ///< turns with nobody speaking in the latency window; per turn
    Count missed_turns;        ///< long off-axis segments with no prompt turn; per such segment
    Count inaccurate_turns;    ///< settled heading off the speaker or target; per turn
    Count misjudged_speaker;   ///< face-centering turns onto a silent attendee; per multi-face frame with a speaker
    Count missed_detections;   ///< segments without a qualified DOA; per segment

    [[nodiscard]] std::array<Count, 5> as_array() const;
    friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

/// Tallies errors in `trace` against the scenario's ground truth. Throws
/// TraceMismatch when the trace refers to attendees the scenario lacks.
EventCounts count_events(const sim::Trace& trace, const sim::Scenario& scenario, const MetricTolerances& tol = {});

/// 10 x (1 - errors/opportunities), rounded half up and clamped to [1, 10];
/// 10 when there were no opportunities.
int score(int errors, int opportunities);

/// Equal-weight mean of the five scores.
double uei(const std::array<int, 5>& scores);

struct UeiReport
{
    std::array<int, 5> p{};
    double uei = 0.0;
    EventCounts counts;
};

UeiReport evaluate(const sim::Trace& trace, const sim::Scenario& scenario, const MetricTolerances& tol = {});

nlohmann::ordered_json to_json(const UeiReport& report);

}  // namespace avatar::metrics
