#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "avatar/cli/commands.hpp"
#include "avatar/cli/config.hpp"
#include "avatar/sim/scenario.hpp"
#include "avatar/ssl/wav.hpp"

namespace fs = std::filesystem;
using avatar::cli::CliConfig;

namespace {

fs::path scenario(const char* name) { return fs::path(AVATAR_SCENARIO_DIR) / name; }

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("avatar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

bool one_diagnostic_line(const std::string& err, const std::string& prefix)
{
    return err.rfind(prefix, 0) == 0 && std::count(err.begin(), err.end(), '\n') == 1;
}

int run_binary(const std::string& args)
{
    const std::string command = std::string(AVATAR_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(CliTest, SimulateSingleSpeaker)
{
    const auto trace = dir_ / "single.jsonl";
    ASSERT_EQ(avatar::cli::cmd_simulate(scenario("single_speaker.json"), {}, trace, {}, out_, err_), 0) << err_.str();
    EXPECT_NE(out_.str().find("final_heading: 90.000"), std::string::npos) << out_.str();
    EXPECT_TRUE(fs::exists(dir_ / "single.csv"));
    EXPECT_TRUE(err_.str().empty());
}

TEST_F(CliTest, SimulateMalformedScenario)
{
    std::ofstream(dir_ / "broken.json") << "{ \"attendees\": [ ";
    EXPECT_EQ(avatar::cli::cmd_simulate(dir_ / "broken.json", {}, dir_ / "t.jsonl", {}, out_, err_), 1);
    EXPECT_TRUE(one_diagnostic_line(err_.str(), "error[validation]: ")) << err_.str();
}

TEST_F(CliTest, SimulateUnwritableOutput)
{
    EXPECT_EQ(avatar::cli::cmd_simulate(scenario("single_speaker.json"), {}, dir_ / "missing" / "t.jsonl", {}, out_,
                                        err_),
              2);
    EXPECT_TRUE(one_diagnostic_line(err_.str(), "error[io]: ")) << err_.str();
}

TEST_F(CliTest, SimulateMissingScenario)
{
    EXPECT_EQ(avatar::cli::cmd_simulate(dir_ / "nope.json", {}, dir_ / "t.jsonl", {}, out_, err_), 2);
}

TEST_F(CliTest, EvaluateGoldenTraces)
{
    for (const char* name : {"single_speaker.json", "two_attendees.json", "group.json"})
    {
        const auto trace = dir_ / "golden.jsonl";
        ASSERT_EQ(avatar::cli::cmd_simulate(scenario(name), {}, trace, {}, out_, err_), 0);
        std::ostringstream report;
        ASSERT_EQ(avatar::cli::cmd_evaluate(trace, scenario(name), {}, dir_ / "report.json", report, err_), 0);
        EXPECT_NE(report.str().find("10.0"), std::string::npos);
        EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "report.json")).at("uei"), 10.0) << name;
    }
}

TEST_F(CliTest, EvaluateTraceFromAnotherScenario)
{
    const auto trace = dir_ / "group.jsonl";
    ASSERT_EQ(avatar::cli::cmd_simulate(scenario("group.json"), {}, trace, {}, out_, err_), 0);
    EXPECT_EQ(avatar::cli::cmd_evaluate(trace, scenario("two_attendees.json"), {}, {}, out_, err_), 1);
    EXPECT_NE(err_.str().find("error[validation]: "), std::string::npos);

    const auto pair_trace = dir_ / "pair.jsonl";
    ASSERT_EQ(avatar::cli::cmd_simulate(scenario("two_attendees.json"), {}, pair_trace, {}, out_, err_), 0);
    EXPECT_EQ(avatar::cli::cmd_evaluate(pair_trace, scenario("group.json"), {}, {}, out_, err_), 1);
}

TEST_F(CliTest, EvaluateTwoUnnecessaryOfEight)
{
    avatar::sim::Scenario s;
    s.attendees = {{0, avatar::Angle(0), 1.0}};
    for (int k = 0; k < 6; ++k)
    {
        s.schedule.push_back({0, 10.0 * k, 10.0 * k + 1.0});
    }
    std::ofstream(dir_ / "metronome.json") << avatar::sim::scenario_to_json(s).dump();
    std::ofstream trace(dir_ / "metronome.jsonl");
    for (int k = 0; k < 6; ++k)
    {
        const double t = 10.0 * k + 0.5;
        trace << nlohmann::json{{"t", t}, {"kind", "DoaQualified"}, {"heading", 0.0}, {"angle", 0.0},
                                {"turn_kind", "Direct"}, {"cluster", nullptr}}.dump()
              << '\n';
        for (double when : {t, k < 2 ? t + 5.0 : -1.0})
        {
            if (when < 0)
            {
                continue;
            }
            trace << nlohmann::json{{"t", when}, {"kind", "Turn"}, {"heading", 0.0}, {"target", 0.0}, {"reason", "Theta1"}}
                         .dump()
                  << '\n'
                  << nlohmann::json{{"t", when + 0.05}, {"kind", "HeadingReached"}, {"heading", 0.0}}.dump() << '\n';
        }
    }
    trace.close();
    std::ostringstream report;
    ASSERT_EQ(avatar::cli::cmd_evaluate(dir_ / "metronome.jsonl", dir_ / "metronome.json", {}, {}, report, err_), 0)
        << err_.str();
    const auto json_start = report.str().find('{');
    const auto doc = nlohmann::json::parse(report.str().substr(json_start));
    EXPECT_EQ(doc.at("p1"), 8);
    EXPECT_EQ(doc.at("uei"), 9.6);
}

TEST_F(CliTest, SimulateThenEvaluateIsReproducible)
{
    for (const char* name : {"single_speaker.json", "two_attendees.json", "group.json"})
    {
        std::string reports[2];
        for (int run = 0; run < 2; ++run)
        {
            const auto trace = dir_ / ("run" + std::to_string(run) + ".jsonl");
            const auto report = dir_ / ("run" + std::to_string(run) + ".json");
            ASSERT_EQ(avatar::cli::cmd_simulate(scenario(name), {}, trace, {}, out_, err_), 0);
            ASSERT_EQ(avatar::cli::cmd_evaluate(trace, scenario(name), {}, report, out_, err_), 0);
            reports[run] = slurp(report);
        }
        EXPECT_EQ(reports[0], reports[1]) << name;
        EXPECT_EQ(slurp(dir_ / "run0.jsonl"), slurp(dir_ / "run1.jsonl")) << name;
    }
}

TEST_F(CliTest, DoaRoundTripThroughDumpedAudio)
{
    avatar::sim::Scenario s;
    s.name = "forty_five";
    s.attendees = {{0, avatar::Angle(45), 1.5}};
    s.schedule = {{0, 0.5, 6.0}};
    s.seed = 5;
    std::ofstream(dir_ / "s.json") << avatar::sim::scenario_to_json(s).dump();
    const CliConfig acoustic = avatar::cli::config_from_json({{"mode", "acoustic"}});
    ASSERT_EQ(avatar::cli::cmd_simulate(dir_ / "s.json", acoustic, dir_ / "t.jsonl", dir_ / "s.wav", out_, err_), 0)
        << err_.str();

    std::ostringstream rows;
    ASSERT_EQ(avatar::cli::cmd_doa(dir_ / "s.wav", {}, rows, err_), 0) << err_.str();
    std::istringstream lines(rows.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "time,angle,confidence");
    std::vector<double> angles;
    while (std::getline(lines, line))
    {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        angles.push_back(std::stod(line.substr(first + 1, second - first - 1)));
    }
    ASSERT_GE(angles.size(), 8u);
    std::sort(angles.begin(), angles.end());
    EXPECT_NEAR(angles[angles.size() / 2], 45.0, 2.0);
}

TEST_F(CliTest, DoaOnSilenceAndWrongChannelCount)
{
    avatar::ssl::AudioFrame silent;
    silent.channels.assign(4, std::vector<double>(16000, 0.0));
    avatar::ssl::write_wav(dir_ / "silent.wav", silent);
    std::ostringstream rows;
    EXPECT_EQ(avatar::cli::cmd_doa(dir_ / "silent.wav", {}, rows, err_), 0);
    EXPECT_EQ(rows.str(), "time,angle,confidence\n");

    avatar::ssl::AudioFrame stereo;
    stereo.channels.assign(2, std::vector<double>(16000, 0.1));
    avatar::ssl::write_wav(dir_ / "stereo.wav", stereo);
    EXPECT_EQ(avatar::cli::cmd_doa(dir_ / "stereo.wav", {}, rows, err_), 1);
    EXPECT_TRUE(one_diagnostic_line(err_.str(), "error[validation]: ")) << err_.str();
}

TEST_F(CliTest, GenWritesAValidScenario)
{
    avatar::sim::GeneratorOptions options;
    options.attendees = 4;
    options.seed = 12;
    ASSERT_EQ(avatar::cli::cmd_gen(options, dir_ / "gen.json", out_, err_), 0);
    const auto s = avatar::sim::load_scenario(dir_ / "gen.json");
    EXPECT_EQ(s.attendees.size(), 4u);
}

TEST(CliConfig, FileValuesAndOverrides)
{
    const auto file = avatar::cli::read_config_file(fs::path(AVATAR_SCENARIO_DIR) / "default_config.json");
    const CliConfig defaults = avatar::cli::config_from_json(file);
    EXPECT_EQ(avatar::cli::config_to_json(defaults), avatar::cli::config_to_json(CliConfig{}));

    nlohmann::json merged = file;
    merged["fov"] = 90.0;
    merged["gap_threshold"] = 3.0;
    merged["mic_count"] = 6;
    const CliConfig c = avatar::cli::config_from_json(merged);
    EXPECT_EQ(c.sim.camera.horizontal_fov, 90.0);
    EXPECT_EQ(c.sim.rules.gap_threshold, 3.0);
    EXPECT_EQ(c.sim.geometry.size(), 6u);

    EXPECT_THROW(avatar::cli::config_from_json({{"fov", 200.0}}), std::invalid_argument);
    EXPECT_THROW(avatar::cli::config_from_json({{"no_such_knob", 1}}), std::invalid_argument);
    EXPECT_THROW(avatar::cli::config_from_json({{"dt", "fast"}}), std::invalid_argument);
}

TEST_F(CliTest, BinaryExitCodes)
{
    const std::string single = scenario("single_speaker.json").string();
    const std::string trace = (dir_ / "bin.jsonl").string();
    EXPECT_EQ(run_binary("simulate " + single + " -o " + trace), 0);
    EXPECT_EQ(run_binary("evaluate " + trace + " " + single), 0);
    EXPECT_EQ(run_binary("simulate " + single + " -o " + trace + " --fov 200"), 1);
    EXPECT_EQ(run_binary("simulate " + single + " -o " + trace + " --bogus-flag 1"), 1);
    EXPECT_EQ(run_binary("simulate " + single + " -o " + (dir_ / "no" / "t.jsonl").string()), 2);
    EXPECT_EQ(run_binary("simulate " + single + " -o " + trace + " --config " + (dir_ / "absent.json").string()), 2);
    EXPECT_EQ(run_binary("gen --attendees 3 --seed 4 -o " + (dir_ / "g.json").string()), 0);
}
