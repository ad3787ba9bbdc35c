#pragma once

// Tabular records and their CSV / JSON encodings.
//
// Floats are written as %.16e (17 significant digits), so text round-trips
// to the same double. Nothing time-dependent goes into data files; run
// metadata lives in the <out>.meta.json sidecar.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wqed/cli/config.hpp"

namespace wqed::cli {

using Cell = std::variant<double, long long, std::string>;
using KeyValues = std::vector<std::pair<std::string, Cell>>;

inline constexpr std::string_view kSingularToken = "sing";
inline constexpr int kSchemaVersion = 1;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    KeyValues footer;
    KeyValues params; // JSON only
};

std::string format_double(double v);

// Header line, one line per row, then "# key,value" footer lines.
std::string to_csv(const Table& t);
// {"schema": {...}, "params": {...}, "rows": [...], "footer": {...}}
std::string to_json(const Table& t);
std::string render(const Table& t, Format f);

// Inverse of to_csv. Tokens with an exponent or nan/inf parse as double,
// plain integers as long long, anything else stays a string.
Table parse_csv(std::string_view text);

// Write through a temporary and rename. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

std::filesystem::path sidecar_path(const std::filesystem::path& out);

KeyValues config_params(const RunConfig& cfg, Command cmd);

} // namespace wqed::cli
