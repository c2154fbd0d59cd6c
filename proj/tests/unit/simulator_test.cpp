#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "avatar/errors.hpp"
#include "avatar/sim/simulator.hpp"
#include "avatar/sim/synthesis.hpp"
#include "avatar/ssl/doa.hpp"
#include "avatar/ssl/vad.hpp"
#include "delay_oracle.hpp"

using avatar::Angle;
using avatar::Timestamp;
using avatar::sim::Scenario;
using avatar::sim::SimConfig;
using avatar::sim::TraceKind;

namespace {

Scenario load(const char* name) { return avatar::sim::load_scenario(std::filesystem::path(AVATAR_SCENARIO_DIR) / name); }

int count(const avatar::sim::Trace& trace, TraceKind kind)
{
    int n = 0;
    for (const auto& e : trace.events)
    {
        n += e.kind() == kind ? 1 : 0;
    }
    return n;
}

std::string jsonl(const avatar::sim::Trace& trace)
{
    std::ostringstream out;
    avatar::sim::write_trace_jsonl(out, trace);
    return out.str();
}

}  // namespace

TEST(Simulator, EmptyScheduleNeverTurns)
{
    Scenario s;
    s.attendees.push_back({0, Angle(45), 1.0});
    s.duration = 10.0;
    const auto trace = avatar::sim::run(s, SimConfig{});
    EXPECT_EQ(count(trace, TraceKind::Turn), 0);
    EXPECT_EQ(trace.summary.size(), 200u);
}

TEST(Simulator, SingleSpeakerSettlesOnTheSpeaker)
{
    const auto trace = avatar::sim::run(load("single_speaker.json"), SimConfig{});
    int theta1 = 0;
    int theta2 = 0;
    for (const auto& e : trace.events)
    {
        if (const auto* t = std::get_if<avatar::sim::TurnRecord>(&e.payload))
        {
            theta1 += t->reason == avatar::attention::Action::Theta1 ? 1 : 0;
            theta2 += t->reason == avatar::attention::Action::Theta2 ? 1 : 0;
        }
    }
    EXPECT_EQ(theta1, 1);
    EXPECT_GE(theta2, 1);
    EXPECT_LE(avatar::angular_distance(Angle(trace.events.back().heading), Angle(90)),
              avatar::attention::CameraConfig{}.tolerance_degrees());
}

TEST(Simulator, AlternatingSpeakersGetANeutralTurn)
{
    const auto trace = avatar::sim::run(load("two_attendees.json"), SimConfig{});
    bool neutral_at_90 = false;
    for (const auto& e : trace.events)
    {
        if (const auto* t = std::get_if<avatar::sim::TurnRecord>(&e.payload))
        {
            neutral_at_90 |= t->reason == avatar::attention::Action::Theta3 &&
                             avatar::angular_distance(t->target, Angle(90)) < 1e-9;
        }
    }
    EXPECT_TRUE(neutral_at_90);
}

TEST(Simulator, DeterministicAndRateLimited)
{
    SimConfig config;
    const Scenario s = load("group.json");
    const auto a = avatar::sim::run(s, config);
    const auto b = avatar::sim::run(s, config);
    EXPECT_EQ(jsonl(a), jsonl(b));
    for (std::size_t i = 1; i < a.summary.size(); ++i)
    {
        ASSERT_LE(avatar::angular_distance(Angle(a.summary[i].heading), Angle(a.summary[i - 1].heading)),
                  config.max_turn_rate * config.dt + 1e-9);
    }
    for (std::size_t i = 1; i < a.events.size(); ++i)
    {
        ASSERT_LE(a.events[i - 1].time, a.events[i].time);
    }
}

TEST(Simulator, NoiselessEventModeReportsScriptedAzimuths)
{
    const Scenario s = load("group.json");
    ASSERT_EQ(s.doa_noise_sigma, 0.0);
    const auto trace = avatar::sim::run(s, SimConfig{});
    int raw = 0;
    for (const auto& e : trace.events)
    {
        if (const auto* d = std::get_if<avatar::sim::DoaRawRecord>(&e.payload))
        {
            ++raw;
            bool matches = false;
            for (const auto& seg : s.schedule)
            {
                matches |= s.is_speaking(seg.attendee_id, e.time.seconds()) &&
                           s.find_attendee(seg.attendee_id)->azimuth == d->angle;
            }
            ASSERT_TRUE(matches) << "t=" << e.time.seconds();
        }
    }
    EXPECT_GT(raw, 0);
}

TEST(Simulator, RejectsBadConfigAndScenario)
{
    SimConfig config;
    config.dt = 0.0;
    EXPECT_THROW(avatar::sim::run(load("single_speaker.json"), config), std::invalid_argument);
    Scenario bad = load("single_speaker.json");
    bad.schedule.push_back({9, 1.0, 2.0});
    EXPECT_THROW(avatar::sim::run(bad, SimConfig{}), avatar::InvalidScenario);
}

TEST(Simulator, AcousticModeRunsTheRealPipeline)
{
    SimConfig config;
    config.mode = avatar::sim::SensingMode::Acoustic;
    const auto trace = avatar::sim::run(load("single_speaker.json"), config);
    EXPECT_GE(count(trace, TraceKind::VadOnset), 1);
    EXPECT_GE(count(trace, TraceKind::DoaRaw), 4);
    EXPECT_LE(avatar::angular_distance(Angle(trace.events.back().heading), Angle(90)), 2.0);
}

TEST(Synthesis, SilenceIsNoiseBelowTheVadThreshold)
{
    Scenario s;
    s.attendees.push_back({0, Angle(0), 1.0});
    s.schedule.push_back({0, 5.0, 6.0});
    const auto frame = avatar::sim::synthesize_frame(s, Timestamp(1.0), 0.05, avatar::ssl::MicArrayGeometry::default_array(), 16000);
    EXPECT_FALSE(avatar::ssl::detect_vad(frame, avatar::ssl::kDefaultVadThreshold).active);
}

TEST(Synthesis, ChannelDelaysMatchFarFieldGeometry)
{
    Scenario s;
    s.attendees.push_back({0, Angle(33), 1.0});
    s.schedule.push_back({0, 0.0, 10.0});
    s.noise_snr_db = 80.0;
    const auto g = avatar::ssl::MicArrayGeometry::default_array();
    const auto frame = avatar::sim::synthesize_frame(s, Timestamp(1.0), 0.5, g, 16000);
    for (std::size_t j = 1; j < g.size(); ++j)
    {
        const double expected = avatar::ssl::far_field_delay(g, 0, j, Angle(33)) * 16000;
        const double measured = avatar::testing::dense_xcorr_delay(frame.channels[0], frame.channels[j], 4.0);
        EXPECT_NEAR(measured, expected, 1.0 / 16.0) << "mic " << j;
    }
}

TEST(Synthesis, TwoSpeakersSuperpose)
{
    Scenario both;
    both.attendees = {{0, Angle(0), 1.0}, {1, Angle(90), 1.0}};
    both.schedule = {{0, 0.0, 5.0}, {1, 0.0, 5.0}};
    both.noise_snr_db = 200.0;
    Scenario first = both;
    first.schedule.pop_back();
    Scenario second = both;
    second.schedule.erase(second.schedule.begin());
    const auto g = avatar::ssl::MicArrayGeometry::default_array();
    const auto fb = avatar::sim::synthesize_frame(both, Timestamp(1), 0.05, g, 16000);
    const auto f1 = avatar::sim::synthesize_frame(first, Timestamp(1), 0.05, g, 16000);
    const auto f2 = avatar::sim::synthesize_frame(second, Timestamp(1), 0.05, g, 16000);
    for (std::size_t i = 0; i < fb.length(); ++i)
    {
        ASSERT_NEAR(fb.channels[2][i], f1.channels[2][i] + f2.channels[2][i], 1e-9);
    }
}

TEST(ProjectFaces, Examples)
{
    Scenario s;
    s.attendees = {{0, Angle(100), 1.0}, {1, Angle(115), 2.0}, {2, Angle(140), 1.0}};
    const avatar::attention::CameraConfig cam;
    const auto faces = avatar::sim::project_faces(s, Angle(100), cam, Timestamp(0));
    ASSERT_EQ(faces.size(), 2u);
    EXPECT_DOUBLE_EQ(faces[0].box_center_x, 320.0);
    EXPECT_DOUBLE_EQ(faces[1].box_center_x, 480.0);
    EXPECT_GT(faces[0].box_width, faces[1].box_width);
}

TEST(ProjectFaces, CenteringOffsetInvertsProjection)
{
    avatar::attention::CameraConfig cam;
    cam.center_tolerance = 0.0;
    for (double delta = -29.99; delta < 30.0; delta += 0.37)
    {
        Scenario s;
        s.attendees = {{0, Angle(200 + delta), 1.0}};
        const auto faces = avatar::sim::project_faces(s, Angle(200), cam, Timestamp(0));
        ASSERT_EQ(faces.size(), 1u);
        ASSERT_NEAR(avatar::attention::centering_offset(faces[0], cam), delta, 1e-6);
    }
}

TEST(ProjectFaces, LipErrorsFlipFlags)
{
    Scenario s;
    s.attendees = {{0, Angle(0), 1.0}};
    s.schedule = {{0, 0.0, 1.0}};
    std::mt19937_64 rng(1);
    const auto flipped = avatar::sim::project_faces(s, Angle(0), {}, Timestamp(0.5), 1.0, rng);
    EXPECT_FALSE(flipped.at(0).lips_moving);
    const auto exact = avatar::sim::project_faces(s, Angle(0), {}, Timestamp(0.5), 0.0, rng);
    EXPECT_TRUE(exact.at(0).lips_moving);
}

TEST(TraceIo, JsonlRoundTrip)
{
    const auto trace = avatar::sim::run(load("group.json"), SimConfig{});
    std::istringstream in(jsonl(trace));
    const auto back = avatar::sim::read_trace_jsonl(in);
    EXPECT_EQ(jsonl(back), jsonl(trace));
    std::istringstream broken("{\"t\": 0, \"kind\": \"Wobble\", \"heading\": 0}\n");
    EXPECT_THROW(avatar::sim::read_trace_jsonl(broken), avatar::TraceMismatch);
}

TEST(TraceIo, SummaryCsv)
{
    const auto trace = avatar::sim::run(load("single_speaker.json"), SimConfig{});
    std::ostringstream out;
    avatar::sim::write_summary_csv(out, trace);
    std::istringstream lines(out.str());
    std::string header;
    std::string first;
    std::getline(lines, header);
    std::getline(lines, first);
    EXPECT_EQ(header, "time,heading,active_speaker,turn_reason");
    EXPECT_EQ(first, "0.0,0.0,0,Theta1");
}
