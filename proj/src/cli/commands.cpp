#include "avatar/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "avatar/errors.hpp"
#include "avatar/metrics.hpp"
#include "avatar/sim/synthesis.hpp"
#include "avatar/ssl/doa.hpp"
#include "avatar/ssl/vad.hpp"
#include "avatar/ssl/wav.hpp"

namespace avatar::cli {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string message)
{
    for (char& c : message)
    {
        if (c == '\n' || c == '\r')
        {
            c = ' ';
        }
    }
    return message;
}

/// Runs `body`, mapping exceptions onto exit codes and a one-line diagnostic.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try
    {
        return body();
    }
    catch (const IoError& e)
    {
        err << "error[io]: " << one_line(e.what()) << '\n';
        return kExitIo;
    }
    catch (const Error& e)
    {
        err << "error[validation]: " << one_line(e.what()) << '\n';
        return kExitValidation;
    }
    catch (const std::invalid_argument& e)
    {
        err << "error[validation]: " << one_line(e.what()) << '\n';
        return kExitValidation;
    }
    catch (const nlohmann::json::exception& e)
    {
        err << "error[validation]: " << one_line(e.what()) << '\n';
        return kExitValidation;
    }
    catch (const ssl::WavError& e)
    {
        err << "error[validation]: " << one_line(e.what()) << '\n';
        return kExitValidation;
    }
    catch (const std::exception& e)
    {
        err << "error[io]: " << one_line(e.what()) << '\n';
        return kExitIo;
    }
}

std::ifstream open_input(const fs::path& path, const char* what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IoError(std::string("cannot open ") + what + " " + path.string());
    }
    return in;
}

std::ofstream open_output(const fs::path& path, const char* what)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError(std::string("cannot write ") + what + " " + path.string());
    }
    return out;
}

void finish(std::ofstream& stream, const fs::path& path)
{
    stream.flush();
    if (!stream)
    {
        throw IoError("failed writing " + path.string());
    }
}

sim::Scenario read_scenario(const fs::path& path)
{
    open_input(path, "scenario");
    return sim::load_scenario(path);
}

std::string format_number(double value)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << value;
    return s.str();
}

}  // namespace

int cmd_simulate(const fs::path& scenario_path, const CliConfig& config, const fs::path& trace_path,
                 const std::optional<fs::path>& wav_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        config.validate();
        const sim::Scenario scenario = read_scenario(scenario_path);
        if (wav_path && config.sim.mode != sim::SensingMode::Acoustic)
        {
            throw std::invalid_argument("--dump-wav needs acoustic mode");
        }
        const sim::Trace trace = sim::run(scenario, config.sim);

        auto trace_out = open_output(trace_path, "trace");
        sim::write_trace_jsonl(trace_out, trace);
        finish(trace_out, trace_path);

        fs::path csv_path = trace_path;
        csv_path.replace_extension(".csv");
        auto csv_out = open_output(csv_path, "summary");
        sim::write_summary_csv(csv_out, trace);
        finish(csv_out, csv_path);

        if (wav_path)
        {
            open_output(*wav_path, "audio");
            ssl::write_wav(*wav_path, sim::synthesize_session(scenario, config.sim.geometry, config.sim.sample_rate));
        }

        int turns = 0;
        for (const auto& e : trace.events)
        {
            turns += e.kind() == sim::TraceKind::Turn ? 1 : 0;
        }
        const double final_heading = trace.events.empty() ? scenario.initial_heading : trace.events.back().heading;
        out << "turns: " << turns << '\n' << "final_heading: " << format_number(final_heading) << '\n';
        return kExitOk;
    });
}

int cmd_evaluate(const fs::path& trace_path, const fs::path& scenario_path, const CliConfig& config,
                 const std::optional<fs::path>& report_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        config.validate();
        const sim::Scenario scenario = read_scenario(scenario_path);
        auto trace_in = open_input(trace_path, "trace");
        const sim::Trace trace = sim::read_trace_jsonl(trace_in);
        const metrics::UeiReport report = metrics::evaluate(trace, scenario, config.tolerances);

        static constexpr std::array kLabels{"p1 unnecessary turns", "p2 missed turns", "p3 inaccurate turns",
                                            "p4 misjudged speaker", "p5 missed detections"};
        const auto counts = report.counts.as_array();
        for (std::size_t i = 0; i < kLabels.size(); ++i)
        {
            out << std::left << std::setw(22) << kLabels[i] << std::right << std::setw(3) << report.p[i] << "   ("
                << counts[i].errors << '/' << counts[i].opportunities << ")\n";
        }
        out << std::left << std::setw(22) << "UEI" << std::right << std::setw(5) << std::fixed << std::setprecision(1)
            << report.uei << '\n';
        out.unsetf(std::ios::floatfield);

        const std::string doc = metrics::to_json(report).dump(2);
        if (report_path)
        {
            auto report_out = open_output(*report_path, "report");
            report_out << doc << '\n';
            finish(report_out, *report_path);
        }
        else
        {
            out << doc << '\n';
        }
        return kExitOk;
    });
}

int cmd_doa(const fs::path& wav_path, const CliConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        config.validate();
        open_input(wav_path, "audio");
        const ssl::AudioFrame audio = ssl::read_wav(wav_path);
        const auto& geometry = config.sim.geometry;
        if (audio.channels.size() != geometry.size())
        {
            throw std::invalid_argument("WAV has " + std::to_string(audio.channels.size()) +
                                        " channels but the array has " + std::to_string(geometry.size()) +
                                        " microphones");
        }

        const auto window = static_cast<std::size_t>(std::llround(config.sim.analysis_window * audio.sample_rate));
        if (window < ssl::AudioFrame::kMinLength)
        {
            throw std::invalid_argument("analysis window shorter than " +
                                        std::to_string(ssl::AudioFrame::kMinLength) + " samples at this sample rate");
        }
        out << "time,angle,confidence\n";
        ssl::VadState vad;
        for (std::size_t start = 0; start + window <= audio.length(); start += window)
        {
            ssl::AudioFrame frame;
            frame.sample_rate = audio.sample_rate;
            frame.start_time = Timestamp(static_cast<double>(start) / audio.sample_rate);
            for (const auto& channel : audio.channels)
            {
                frame.channels.emplace_back(channel.begin() + static_cast<std::ptrdiff_t>(start),
                                            channel.begin() + static_cast<std::ptrdiff_t>(start + window));
            }
            if (!ssl::detect_vad(frame, config.sim.vad_threshold, vad).active)
            {
                continue;
            }
            try
            {
                const ssl::DoaEstimate doa = ssl::estimate_doa(frame, geometry, config.sim.vad_threshold);
                out << format_number(doa.timestamp.seconds()) << ',' << format_number(doa.angle.degrees()) << ','
                    << format_number(doa.confidence) << '\n';
            }
            catch (const NoPeak&)
            {
            }
            catch (const NoVoiceActivity&)
            {
            }
        }
        return kExitOk;
    });
}

int cmd_gen(const sim::GeneratorOptions& options, const std::optional<fs::path>& out_path, std::ostream& out,
            std::ostream& err)
{
    return guarded(err, [&] {
        const std::string doc = sim::scenario_to_json(sim::generate_scenario(options)).dump(2);
        if (out_path)
        {
            auto file = open_output(*out_path, "scenario");
            file << doc << '\n';
            finish(file, *out_path);
        }
        else
        {
            out << doc << '\n';
        }
        return kExitOk;
    });
}

}  // namespace avatar::cli
