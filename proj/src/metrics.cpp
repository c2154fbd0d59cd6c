#include "avatar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "avatar/errors.hpp"

namespace avatar::metrics {

namespace {

using sim::TraceEvent;
using sim::TraceKind;

bool overlaps(const sim::SpeechSegment& s, double from, double to) { return s.start <= to && s.end > from; }

/// Azimuths of attendees speaking at some point in [from, to], without repeats.
std::vector<Angle> speakers_between(const sim::Scenario& scenario, double from, double to)
{
    std::set<int> ids;
    std::vector<Angle> out;
    for (const auto& s : scenario.schedule)
    {
        if (overlaps(s, from, to) && ids.insert(s.attendee_id).second)
        {
            out.push_back(scenario.find_attendee(s.attendee_id)->azimuth);
        }
    }
    return out;
}

bool near_any(Angle heading, const std::vector<Angle>& candidates, double tol)
{
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](Angle a) { return angular_distance(heading, a) <= tol; });
}

/// Speaker references a turn of this kind is judged against.
std::vector<Angle> references(const sim::TurnRecord& turn, std::vector<Angle> speakers)
{
    if (turn.reason == attention::Action::Theta3)
    {
        return {turn.target};
    }
    if (turn.reason == attention::Action::Theta4 && speakers.size() > 1)
    {
        try
        {
            speakers.push_back(circular_mean(speakers));
        }
        catch (const DegenerateMean&)
        {
        }
    }
    return speakers;
}

double heading_at(const std::vector<TraceEvent>& events, double t, double initial)
{
    double heading = initial;
    for (const TraceEvent& e : events)
    {
        if (e.time.seconds() > t)
        {
            break;
        }
        heading = e.heading;
    }
    return heading;
}

/// Slack for events logged just past a segment boundary or the session end.
constexpr double kTraceSlack = 1.0;

void check_references(const sim::Trace& trace, const sim::Scenario& scenario)
{
    double previous = 0.0;
    for (const TraceEvent& e : trace.events)
    {
        const double t = e.time.seconds();
        if (t < previous)
        {
            throw TraceMismatch("trace events are not in time order");
        }
        previous = t;
        if (t > scenario.session_length() + kTraceSlack)
        {
            throw TraceMismatch("trace runs past the end of the scenario");
        }
        if (e.kind() == TraceKind::DoaRaw &&
            std::none_of(scenario.schedule.begin(), scenario.schedule.end(),
                         [&](const auto& s) { return overlaps(s, t - kTraceSlack, t + kTraceSlack); }))
        {
            throw TraceMismatch("trace has a DOA at t=" + std::to_string(t) + " where the scenario is silent");
        }
        if (const auto* frame = std::get_if<sim::FaceFrameRecord>(&e.payload))
        {
            for (const auto& face : frame->faces)
            {
                if (scenario.find_attendee(face.face_id) == nullptr)
                {
                    throw TraceMismatch("trace refers to unknown attendee " + std::to_string(face.face_id));
                }
            }
        }
    }
}

}  // namespace

void MetricTolerances::validate() const
{
    if (!(heading_tolerance > 0.0) || !(latency > 0.0) || !(angle_threshold >= 0.0))
    {
        throw std::invalid_argument("metric tolerances must be positive");
    }
}

std::array<Count, 5> EventCounts::as_array() const
{
    return {unnecessary_turns, missed_turns, inaccurate_turns, misjudged_speaker, missed_detections};
}

EventCounts count_events(const sim::Trace& trace, const sim::Scenario& scenario, const MetricTolerances& tol)
{
    tol.validate();
    check_references(trace, scenario);
    const auto& events = trace.events;
    EventCounts counts;

    for (std::size_t i = 0; i < events.size(); ++i)
    {
        const auto* turn = std::get_if<sim::TurnRecord>(&events[i].payload);
        if (turn == nullptr)
        {
            continue;
        }
        const double t = events[i].time.seconds();
        const auto speakers = speakers_between(scenario, t - tol.latency, t);

        ++counts.unnecessary_turns.opportunities;
        if (speakers.empty())
        {
            ++counts.unnecessary_turns.errors;
        }

        ++counts.inaccurate_turns.opportunities;
        double settled = events.back().heading;
        for (std::size_t j = i + 1; j < events.size(); ++j)
        {
            if (events[j].kind() == TraceKind::HeadingReached)
            {
                settled = events[j].heading;
                break;
            }
        }
        const auto refs = references(*turn, speakers);
        if (!refs.empty() && !near_any(Angle(settled), refs, tol.heading_tolerance))
        {
            ++counts.inaccurate_turns.errors;
        }

        if (turn->reason == attention::Action::Theta2 || turn->reason == attention::Action::Theta4)
        {
            if (!near_any(turn->target, references(*turn, speakers), tol.heading_tolerance))
            {
                ++counts.misjudged_speaker.errors;
            }
        }
    }

    for (const TraceEvent& e : events)
    {
        const auto* frame = std::get_if<sim::FaceFrameRecord>(&e.payload);
        if (frame == nullptr || frame->faces.size() < 2)
        {
            continue;
        }
        const bool someone_speaks = std::any_of(frame->faces.begin(), frame->faces.end(), [&](const auto& f) {
            return scenario.is_speaking(f.face_id, e.time.seconds());
        });
        if (someone_speaks)
        {
            ++counts.misjudged_speaker.opportunities;
        }
    }
    counts.misjudged_speaker.errors = std::min(counts.misjudged_speaker.errors, counts.misjudged_speaker.opportunities);

    for (const auto& s : scenario.schedule)
    {
        const Angle speaker = scenario.find_attendee(s.attendee_id)->azimuth;

        ++counts.missed_detections.opportunities;
        const bool detected = std::any_of(events.begin(), events.end(), [&](const TraceEvent& e) {
            return e.kind() == TraceKind::DoaQualified && e.time.seconds() >= s.start && e.time.seconds() <= s.end;
        });
        if (!detected)
        {
            ++counts.missed_detections.errors;
        }

        const double onset_heading = heading_at(events, s.start, scenario.initial_heading);
        if (s.end - s.start > tol.latency && angular_distance(Angle(onset_heading), speaker) > tol.angle_threshold)
        {
            ++counts.missed_turns.opportunities;
            const bool turned = std::any_of(events.begin(), events.end(), [&](const TraceEvent& e) {
                return e.kind() == TraceKind::Turn && e.time.seconds() >= s.start &&
                       e.time.seconds() <= s.start + tol.latency;
            });
            if (!turned)
            {
                ++counts.missed_turns.errors;
            }
        }
    }
    return counts;
}

int score(int errors, int opportunities)
{
    if (errors < 0 || opportunities < 0 || errors > opportunities)
    {
        throw std::invalid_argument("score: need 0 <= errors <= opportunities");
    }
    if (opportunities == 0)
    {
        return 10;
    }
    // round(10 (o - e) / o) with halves rounded up, in exact integer arithmetic.
    const long long o = opportunities;
    const long long e = errors;
    const auto rounded = static_cast<int>((20 * (o - e) + o) / (2 * o));
    return std::clamp(rounded, 1, 10);
}

double uei(const std::array<int, 5>& scores)
{
    int sum = 0;
    for (int p : scores)
    {
        if (p < 1 || p > 10)
        {
            throw std::invalid_argument("uei: scores must lie in [1, 10]");
        }
        sum += p;
    }
    return static_cast<double>(sum) / 5.0;
}

UeiReport evaluate(const sim::Trace& trace, const sim::Scenario& scenario, const MetricTolerances& tol)
{
    UeiReport report;
    report.counts = count_events(trace, scenario, tol);
    const auto counts = report.counts.as_array();
    for (std::size_t i = 0; i < counts.size(); ++i)
    {
        report.p[i] = score(counts[i].errors, counts[i].opportunities);
    }
    report.uei = uei(report.p);
    return report;
}

nlohmann::ordered_json to_json(const UeiReport& report)
{
    static constexpr std::array kNames{"unnecessary_turns", "missed_turns", "inaccurate_turns", "misjudged_speaker",
                                       "missed_detections"};
    nlohmann::ordered_json doc;
    for (std::size_t i = 0; i < report.p.size(); ++i)
    {
        doc["p" + std::to_string(i + 1)] = report.p[i];
    }
    doc["uei"] = report.uei;
    const auto counts = report.counts.as_array();
    for (std::size_t i = 0; i < counts.size(); ++i)
    {
        doc["counts"][kNames[i]] = {{"errors", counts[i].errors}, {"opportunities", counts[i].opportunities}};
    }
    return doc;
}

}  // namespace avatar::metrics
