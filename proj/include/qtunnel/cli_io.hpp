#pragma once

// Command-line parsing and serialization: CSV writers for densities,
// summary tables and time series, the JSON run manifest, and the JSON
// config file sharing its field names with the CLI flags. Flags override
// config-file values which override built-in defaults.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtunnel/experiments.hpp"
#include "qtunnel/observables.hpp"
#include "qtunnel/types.hpp"

namespace qtunnel::io {

/// Locale-independent shortest-general formatting with 17 significant
/// digits; round-trip exact for doubles.
std::string format_double(double x);

/// CSV with header `site,<label1>,<label2>,...`, one row per site.
void write_density_csv(const std::string& path,
                       const std::vector<std::pair<std::string, dvec>>& columns);

/// CSV with the fixed header
/// `sigma,d,h,snapshot_time,max_free,max_transmitted,shift,transmitted_norm,flags`,
/// rows sorted by (sigma, d, h). Flags are joined with ';'.
void write_summary_csv(const std::string& path, const SweepTable& table);

/// CSV time series of one paired run.
void write_timeseries_csv(const std::string& path, const RunRecord& record);

/// Streaming CRC-32 (zlib polynomial) of a file, as 8 hex digits.
std::string crc32_file_hex(const std::string& path);

/// JSON document capturing tool version, timestamp, the effective
/// configuration, resolved snapshot parameters, and a checksum per
/// emitted file. Written last so it can name every other file.
void write_run_manifest(const std::string& path, const std::string& subcommand,
                        const ExperimentConfig& cfg, std::size_t resolved_steps,
                        const std::vector<std::string>& files);

/// Config serialization; keys match the CLI flag names.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Writes the effective config next to the run outputs.
void write_config_echo(const std::string& path, const ExperimentConfig& cfg);

struct CliInvocation {
    std::string subcommand; // single-run | snapshot | height-sweep | width-scan
    ExperimentConfig cfg;

    bool operator==(const CliInvocation&) const = default;
};

/// Outcome of argument parsing. exit_code 0 with an invocation means
/// proceed; 0 without one means a help request (message holds the text);
/// 1 is a usage error with the reason in message.
struct ParseOutcome {
    int exit_code = 0;
    std::string message;
    std::optional<CliInvocation> invocation;
};

/// Parses argv (without the program name). Never prints; the CLI decides
/// what goes to stdout/stderr.
ParseOutcome parse_invocation(const std::vector<std::string>& args);

} // namespace qtunnel::io
