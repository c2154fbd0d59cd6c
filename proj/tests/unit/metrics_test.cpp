#include <filesystem>

#include <gtest/gtest.h>

#include "avatar/errors.hpp"
#include "avatar/metrics.hpp"
#include "avatar/sim/simulator.hpp"

using avatar::Angle;
using avatar::Timestamp;
using avatar::attention::Action;
using avatar::metrics::count_events;
using avatar::metrics::score;
using avatar::metrics::uei;
using avatar::sim::Scenario;
using avatar::sim::Trace;
using avatar::sim::TraceEvent;

namespace {

Scenario load(const char* name) { return avatar::sim::load_scenario(std::filesystem::path(AVATAR_SCENARIO_DIR) / name); }

TraceEvent turn(double t, double heading, double target, Action reason)
{
    return {Timestamp(t), heading, avatar::sim::TurnRecord{Angle(target), reason}};
}

TraceEvent reached(double t, double heading) { return {Timestamp(t), heading, avatar::sim::HeadingReachedRecord{}}; }

TraceEvent qualified(double t, double heading, double angle)
{
    return {Timestamp(t), heading, avatar::sim::DoaQualifiedRecord{Angle(angle), avatar::qualify::TurnKind::Neutral, {}}};
}

/// Speaker dead ahead, six one-second utterances ten seconds apart.
Scenario metronome()
{
    Scenario s;
    s.attendees = {{0, Angle(0), 1.0}};
    for (int k = 0; k < 6; ++k)
    {
        s.schedule.push_back({0, 10.0 * k, 10.0 * k + 1.0});
    }
    s.duration = 70.0;
    return s;
}

/// One neutral turn per utterance, each settling on its target, plus
/// `extra` turns in the silent stretches.
Trace metronome_trace(int extra)
{
    Trace trace;
    for (int k = 0; k < 6; ++k)
    {
        const double t = 10.0 * k + 0.5;
        trace.events.push_back(qualified(t, 0.0, 0.0));
        trace.events.push_back(turn(t, 0.0, 0.0, Action::Theta3));
        trace.events.push_back(reached(t + 0.05, 0.0));
        if (k < extra)
        {
            trace.events.push_back(turn(t + 5.0, 0.0, 0.0, Action::Theta3));
            trace.events.push_back(reached(t + 5.05, 0.0));
        }
    }
    return trace;
}

}  // namespace

TEST(Score, Examples)
{
    EXPECT_EQ(score(0, 8), 10);
    EXPECT_EQ(score(8, 8), 1);
    EXPECT_EQ(score(2, 8), 8);
    EXPECT_EQ(score(0, 0), 10);
    EXPECT_THROW(score(3, 2), std::invalid_argument);
}

TEST(Uei, Examples)
{
    EXPECT_EQ(uei({10, 10, 10, 10, 10}), 10.0);
    EXPECT_EQ(uei({7, 7, 7, 7, 7}), 7.0);
    EXPECT_EQ(uei({10, 9, 8, 7, 6}), 8.0);
    EXPECT_THROW(uei({0, 10, 10, 10, 10}), std::invalid_argument);
}

TEST(ScoreProperties, MonotoneAndRoundsHalfUp)
{
    for (int o = 1; o <= 200; ++o)
    {
        int previous = 11;
        for (int e = 0; e <= o; ++e)
        {
            const int p = score(e, o);
            ASSERT_LE(p, previous);
            ASSERT_GE(p, 1);
            ASSERT_LE(p, 10);
            // Independent check in exact rational arithmetic: p is the integer
            // nearest 10(o-e)/o, ties upward, before clamping.
            const int scaled = 10 * (o - e);
            const int nearest = (2 * scaled >= (2 * (scaled / o) + 1) * o) ? scaled / o + 1 : scaled / o;
            ASSERT_EQ(p, std::max(1, nearest)) << e << "/" << o;
            previous = p;
        }
    }
}

TEST(UeiProperties, MonotoneInEachScore)
{
    for (int i = 0; i < 5; ++i)
    {
        std::array<int, 5> scores{5, 5, 5, 5, 5};
        double previous = 0.0;
        for (int p = 1; p <= 10; ++p)
        {
            scores[static_cast<std::size_t>(i)] = p;
            ASSERT_GT(uei(scores), previous);
            previous = uei(scores);
        }
    }
}

TEST(CountEvents, PerfectSingleSpeakerTrace)
{
    const Scenario s = load("single_speaker.json");
    const auto counts = count_events(avatar::sim::run(s, {}), s);
    for (const auto& c : counts.as_array())
    {
        EXPECT_EQ(c.errors, 0);
    }
}

TEST(CountEvents, TurnDuringSilenceIsUnnecessary)
{
    Scenario s;
    s.attendees = {{0, Angle(0), 1.0}};
    s.schedule = {{0, 0.0, 1.0}};
    Trace trace;
    trace.events.push_back(turn(4.0, 0.0, 30.0, Action::Theta1));
    EXPECT_EQ(count_events(trace, s).unnecessary_turns.errors, 1);
}

TEST(CountEvents, EmptyTraceMissesLongSegment)
{
    Scenario s;
    s.attendees = {{0, Angle(90), 1.0}};
    s.schedule = {{0, 0.0, 5.0}};
    const auto counts = count_events(Trace{}, s);
    EXPECT_EQ(counts.missed_turns.errors, 1);
    EXPECT_EQ(counts.missed_turns.opportunities, 1);
    EXPECT_EQ(counts.missed_detections.errors, 1);
}

TEST(CountEvents, InaccurateAndMisjudgedTurns)
{
    Scenario s;
    s.attendees = {{0, Angle(90), 1.0}, {1, Angle(100), 1.0}};
    s.schedule = {{0, 0.0, 5.0}};
    Trace trace;
    trace.events.push_back(qualified(0.0, 0.0, 90.0));
    trace.events.push_back({Timestamp(0.5), 90.0,
                            avatar::sim::FaceFrameRecord{{{0, 320.0, 50.0, true}, {1, 426.0, 50.0, false}}}});
    trace.events.push_back(turn(0.5, 90.0, 120.0, Action::Theta4));
    trace.events.push_back(reached(0.9, 120.0));
    const auto counts = count_events(trace, s);
    EXPECT_EQ(counts.inaccurate_turns.errors, 1);
    EXPECT_EQ(counts.misjudged_speaker.errors, 1);
    EXPECT_EQ(counts.misjudged_speaker.opportunities, 1);
}

TEST(CountEvents, UnknownFaceIsAMismatch)
{
    Scenario s;
    s.attendees = {{0, Angle(0), 1.0}};
    Trace trace;
    trace.events.push_back({Timestamp(0.0), 0.0, avatar::sim::FaceFrameRecord{{{5, 320.0, 50.0, false}}}});
    EXPECT_THROW(count_events(trace, s), avatar::TraceMismatch);
}

TEST(CountEvents, TwoOfEightUnnecessary)
{
    const auto report = avatar::metrics::evaluate(metronome_trace(2), metronome());
    EXPECT_EQ(report.counts.unnecessary_turns.errors, 2);
    EXPECT_EQ(report.counts.unnecessary_turns.opportunities, 8);
    EXPECT_EQ(report.p[0], 8);
    EXPECT_EQ(report.uei, 9.6);
}

TEST(CountEventsProperties, TrailingSilenceChangesNothing)
{
    for (const char* name : {"single_speaker.json", "two_attendees.json", "group.json"})
    {
        const Scenario s = load(name);
        const Trace trace = avatar::sim::run(s, {});
        Scenario longer = s;
        longer.duration = s.session_length() + 30.0;
        EXPECT_EQ(count_events(trace, s), count_events(trace, longer)) << name;
    }
}

TEST(CountEventsProperties, ExtraUnnecessaryTurnNeverRaisesP1)
{
    int previous = 11;
    for (int extra = 0; extra <= 6; ++extra)
    {
        const int p1 = avatar::metrics::evaluate(metronome_trace(extra), metronome()).p[0];
        ASSERT_LE(p1, previous);
        previous = p1;
    }
}

TEST(UeiReport, JsonFields)
{
    const auto doc = avatar::metrics::to_json(avatar::metrics::evaluate(metronome_trace(2), metronome()));
    EXPECT_EQ(doc.at("p1"), 8);
    EXPECT_EQ(doc.at("uei"), 9.6);
    EXPECT_EQ(doc.at("counts").at("unnecessary_turns").at("opportunities"), 8);
}
