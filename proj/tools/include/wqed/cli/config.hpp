#pragma once

// Run configuration shared by all subcommands.
//
// A config file is one flat JSON object. Keys are the long flag names with
// '-' replaced by '_' (gamma1d, nu_s, dt_out, ...). Values are in units where
// gamma_1d = 1 unless gamma1d is changed. Command-line flags override keys.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/nm_measure.hpp"
#include "wqed/params.hpp"

namespace wqed::cli {

// Exit code 1.
class ConfigError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };
enum class Command { evolve, sweep, field, validate };

std::string_view to_string(Command c);
std::string_view to_string(Format f);
std::string_view to_string(SweepAxis a);

struct RunConfig {
    SystemParams sys;
    PacketParams pkt;
    double t0 = kDefaultCutoff; // evolve start time; NM cutoff for sweep
    std::optional<double> t_max;
    double dt_out = 0.01;
    SweepAxis axis = SweepAxis::detuning;
    std::vector<double> grid;
    std::optional<double> r_d;
    std::vector<double> times;
    std::optional<double> halfwidth;
    std::optional<double> step;
    std::optional<int> modes;
    std::optional<double> band;
    unsigned threads = 1;
    std::string out; // empty writes to stdout
    Format format = Format::csv;
};

inline constexpr double kDefaultEvolveTMax = 8.0;

// Merge a flat JSON object into cfg. Unknown keys and wrong types throw ConfigError.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin = "config");

// Throws IoError if the file cannot be read.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// "a,b,c" or "start:stop:count[:log]".
std::vector<double> parse_grid(std::string_view text);
std::vector<double> parse_list(std::string_view text);
double parse_number(std::string_view token);

SweepAxis parse_axis(std::string_view s);
Format parse_format(std::string_view s);

// Physical parameters plus whatever the subcommand needs. Throws ConfigError.
void validate(const RunConfig& cfg, Command cmd);

} // namespace wqed::cli
