// Command-line front end: simulate, evaluate, doa, gen.

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "avatar/cli/commands.hpp"
#include "avatar/cli/config.hpp"

namespace {

using avatar::cli::CliConfig;

/// Config-file path plus flag overrides, merged into one CliConfig on demand.
struct ConfigFlags
{
    std::string file;
    std::map<std::string, double> numbers;
    std::map<std::string, int> integers;
    std::map<std::string, std::string> strings;

    void attach(CLI::App& app)
    {
        app.add_option("--config", file, "Flat JSON config file");
        for (const char* key : {"gap_threshold", "angle_threshold", "speech_activity_min", "cluster_join_threshold", "dt",
                                "max_turn_rate", "doa_period", "analysis_window", "sample_rate", "vad_threshold",
                                "lip_error_probability", "fov", "center_tolerance", "mic_radius", "speed_of_sound",
                                "heading_tolerance", "latency", "missed_turn_angle"})
        {
            add(app, key, numbers[key]);
        }
        for (const char* key : {"frame_width", "mic_count"})
        {
            add(app, key, integers[key]);
        }
        for (const char* key : {"mode", "gap_reference"})
        {
            add(app, key, strings[key]);
        }
    }

    template <class T>
    void add(CLI::App& app, const std::string& key, T& target)
    {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        options_[key] = app.add_option(flag, target, "Override '" + key + "'");
    }

    [[nodiscard]] CliConfig resolve() const
    {
        nlohmann::json doc = file.empty() ? nlohmann::json::object() : avatar::cli::read_config_file(file);
        if (!doc.is_object())
        {
            throw std::invalid_argument("config must be a JSON object");
        }
        for (const auto& [key, option] : options_)
        {
            if (option->count() == 0)
            {
                continue;
            }
            if (numbers.contains(key))
            {
                doc[key] = numbers.at(key);
            }
            else if (integers.contains(key))
            {
                doc[key] = integers.at(key);
            }
            else
            {
                doc[key] = strings.at(key);
            }
        }
        return avatar::cli::config_from_json(doc);
    }

private:
    std::map<std::string, CLI::Option*> options_;
};

/// Resolves the config, reporting failures in the CLI's diagnostic format.
std::optional<CliConfig> resolve(const ConfigFlags& flags, int& exit_code)
{
    try
    {
        return flags.resolve();
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error[validation]: " << e.what() << '\n';
        exit_code = avatar::cli::kExitValidation;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error[io]: " << e.what() << '\n';
        exit_code = avatar::cli::kExitIo;
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Meeting-robot attention pipeline: simulation, scoring and sound localization"};
    app.require_subcommand(1);

    ConfigFlags sim_flags;
    std::string scenario_path;
    std::string trace_path;
    std::string wav_out;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its trace");
    simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
    simulate->add_option("-o,--out", trace_path, "Trace output (JSON Lines); the CSV summary goes beside it")
        ->required();
    simulate->add_option("--dump-wav", wav_out, "Write the synthesized session audio (acoustic mode)");
    sim_flags.attach(*simulate);

    ConfigFlags eval_flags;
    std::string eval_trace;
    std::string eval_scenario;
    std::string report_path;
    auto* evaluate = app.add_subcommand("evaluate", "Score a trace against its scenario");
    evaluate->add_option("trace", eval_trace, "Trace JSON Lines")->required();
    evaluate->add_option("scenario", eval_scenario, "Scenario JSON")->required();
    evaluate->add_option("-o,--out", report_path, "Report JSON output (default: standard output)");
    eval_flags.attach(*evaluate);

    ConfigFlags doa_flags;
    std::string wav_in;
    auto* doa = app.add_subcommand("doa", "Estimate directions of arrival from a multichannel WAV");
    doa->add_option("wav", wav_in, "Input WAV")->required();
    doa_flags.attach(*doa);

    avatar::sim::GeneratorOptions gen_options;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a random scenario");
    gen->add_option("--attendees", gen_options.attendees, "Number of attendees");
    gen->add_option("--seed", gen_options.seed, "Random seed");
    gen->add_option("--duration", gen_options.duration, "Session length in seconds");
    gen->add_option("--doa-noise-sigma", gen_options.doa_noise_sigma, "Event-mode DOA noise, degrees");
    gen->add_option("-o,--out", gen_out, "Output path (default: standard output)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() == 0)
        {
            return app.exit(e);
        }
        std::cerr << "error[validation]: " << e.what() << '\n';
        return avatar::cli::kExitValidation;
    }

    int code = avatar::cli::kExitOk;
    auto optional_path = [](const std::string& p) {
        return p.empty() ? std::nullopt : std::optional<std::filesystem::path>(p);
    };
    if (simulate->parsed())
    {
        if (auto config = resolve(sim_flags, code))
        {
            code = avatar::cli::cmd_simulate(scenario_path, *config, trace_path, optional_path(wav_out), std::cout,
                                             std::cerr);
        }
    }
    else if (evaluate->parsed())
    {
        if (auto config = resolve(eval_flags, code))
        {
            code = avatar::cli::cmd_evaluate(eval_trace, eval_scenario, *config, optional_path(report_path), std::cout,
                                             std::cerr);
        }
    }
    else if (doa->parsed())
    {
        if (auto config = resolve(doa_flags, code))
        {
            code = avatar::cli::cmd_doa(wav_in, *config, std::cout, std::cerr);
        }
    }
    else if (gen->parsed())
    {
        code = avatar::cli::cmd_gen(gen_options, optional_path(gen_out), std::cout, std::cerr);
    }
    return code;
}
