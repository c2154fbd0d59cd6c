#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "avatar/cli/config.hpp"
#include "avatar/sim/scenario.hpp"

namespace avatar::cli {

enum ExitCode : int
{
    kExitOk = 0,
    kExitValidation = 1,
    kExitIo = 2,
};

/// Diagnostics are single lines on `err` prefixed `error[validation]:` or
/// `error[io]:`, matching the exit code.

/// Runs a scenario, writes the JSON Lines trace and a CSV summary beside it
/// (same stem, .csv), optionally dumps the synthesized audio (acoustic mode),
/// and prints the turn count and final heading.
int cmd_simulate(const std::filesystem::path& scenario_path, const CliConfig& config,
                 const std::filesystem::path& trace_path, const std::optional<std::filesystem::path>& wav_path,
                 std::ostream& out, std::ostream& err);

/// Scores a trace against its scenario, prints a table and writes the report
/// JSON (to `report_path`, or to standard output when absent).
int cmd_evaluate(const std::filesystem::path& trace_path, const std::filesystem::path& scenario_path,
                 const CliConfig& config, const std::optional<std::filesystem::path>& report_path,
                 std::ostream& out, std::ostream& err);

/// Estimates one DOA per voice-active analysis window of a multichannel WAV
/// and prints `time,angle,confidence` rows.
int cmd_doa(const std::filesystem::path& wav_path, const CliConfig& config, std::ostream& out, std::ostream& err);

/// Writes a generated scenario to `out_path`, or to standard output when absent.
int cmd_gen(const sim::GeneratorOptions& options, const std::optional<std::filesystem::path>& out_path,
            std::ostream& out, std::ostream& err);

}  // namespace avatar::cli
