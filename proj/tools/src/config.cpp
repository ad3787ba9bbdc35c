#include "wqed/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wqed/field.hpp"

namespace wqed::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

double number_of(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::string string_of(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> numbers_of(const json& v, const std::string& key, bool grid) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        return grid ? parse_grid(s) : parse_list(s);
    }
    if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array or string");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number_of(x, key));
    return out;
}

int integer_of(const json& v, const std::string& key) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError("config key '" + key + "' must be an integer");
    }
    return v.get<int>();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

std::string_view to_string(Command c) {
    switch (c) {
    case Command::evolve: return "evolve";
    case Command::sweep: return "sweep";
    case Command::field: return "field";
    case Command::validate: return "validate";
    }
    return "?";
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

std::string_view to_string(SweepAxis a) {
    return a == SweepAxis::detuning ? "detuning" : "linewidth";
}

double parse_number(std::string_view token) {
    token = trim(token);
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto* begin = token.data();
    if (!token.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError("not a number: '" + std::string(token) + "'");
    }
    return v;
}

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (auto tok : split(text, ',')) out.push_back(parse_number(tok));
    return out;
}

std::vector<double> parse_grid(std::string_view text) {
    if (text.find(':') == std::string_view::npos) return parse_list(text);
    const auto parts = split(text, ':');
    require(parts.size() == 3 || parts.size() == 4,
            "grid range must be start:stop:count[:log], got '" + std::string(text) + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double count_d = parse_number(parts[2]);
    const bool log = parts.size() == 4;
    if (log) require(parts[3] == "log", "grid spacing flag must be 'log'");
    require(count_d >= 1.0 && count_d == std::floor(count_d) && count_d < 1e7,
            "grid count must be a positive integer");
    const auto n = static_cast<long>(count_d);
    if (log) require(start > 0.0 && stop > 0.0, "log grid needs positive bounds");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        if (n == 1) {
            out.push_back(start);
            break;
        }
        const double f = static_cast<double>(k) / static_cast<double>(n - 1);
        out.push_back(log ? start * std::pow(stop / start, f) : start + (stop - start) * f);
    }
    out.back() = n == 1 ? start : stop;
    return out;
}

SweepAxis parse_axis(std::string_view s) {
    if (s == "detuning") return SweepAxis::detuning;
    if (s == "linewidth") return SweepAxis::linewidth;
    throw ConfigError("axis must be 'detuning' or 'linewidth', got '" + std::string(s) + "'");
}

Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("format must be 'csv' or 'json', got '" + std::string(s) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(origin) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");

    for (const auto& [key, v] : doc.items()) {
        if (key == "gamma1d") cfg.sys.gamma_1d = number_of(v, key);
        else if (key == "nu_s") cfg.sys.nu_s = number_of(v, key);
        else if (key == "delta") cfg.pkt.delta = number_of(v, key);
        else if (key == "detuning") cfg.pkt.detuning = number_of(v, key);
        else if (key == "c0") cfg.pkt.c0 = number_of(v, key);
        else if (key == "t0") cfg.t0 = number_of(v, key);
        else if (key == "tmax") cfg.t_max = number_of(v, key);
        else if (key == "dt_out") cfg.dt_out = number_of(v, key);
        else if (key == "axis") cfg.axis = parse_axis(string_of(v, key));
        else if (key == "grid") cfg.grid = numbers_of(v, key, true);
        else if (key == "rd") cfg.r_d = number_of(v, key);
        else if (key == "times") cfg.times = numbers_of(v, key, false);
        else if (key == "halfwidth") cfg.halfwidth = number_of(v, key);
        else if (key == "step") cfg.step = number_of(v, key);
        else if (key == "modes") cfg.modes = integer_of(v, key);
        else if (key == "band") cfg.band = number_of(v, key);
        else if (key == "threads") {
            const int n = integer_of(v, key);
            require(n >= 0, "threads must be >= 0");
            cfg.threads = static_cast<unsigned>(n);
        } else if (key == "out") cfg.out = string_of(v, key);
        else if (key == "format") cfg.format = parse_format(string_of(v, key));
        else throw ConfigError(std::string(origin) + ": unknown key '" + key + "'");
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str(), path.string());
}

void validate(const RunConfig& cfg, Command cmd) {
    try {
        wqed::validate(cfg.sys, cfg.pkt);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    require(std::isfinite(cfg.t0) && cfg.t0 >= 0.0, "t0 must be >= 0");
    if (cfg.t_max) require(std::isfinite(*cfg.t_max), "tmax must be finite");
    if (cfg.r_d) require(std::isfinite(*cfg.r_d) && *cfg.r_d != 0.0, "rd must be finite and nonzero");
    if (cfg.halfwidth) require(*cfg.halfwidth > 0.0, "halfwidth must be > 0");
    if (cfg.step) require(*cfg.step > 0.0, "step must be > 0");
    if (cfg.band) require(*cfg.band > 0.0, "band must be > 0");
    if (cfg.modes) require(*cfg.modes >= 3 && *cfg.modes % 2 == 1, "modes must be odd and >= 3");

    switch (cmd) {
    case Command::evolve: {
        const double t_max = cfg.t_max.value_or(kDefaultEvolveTMax);
        require(t_max > cfg.t0, "tmax must exceed t0");
        require(cfg.dt_out > 0.0 && std::isfinite(cfg.dt_out), "dt_out must be > 0");
        require((t_max - cfg.t0) / cfg.dt_out < 1e8, "too many output rows");
        break;
    }
    case Command::sweep:
        require(!cfg.grid.empty(), "sweep needs a non-empty grid");
        for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
            require(std::isfinite(cfg.grid[i]), "grid values must be finite");
            if (i > 0) require(cfg.grid[i] > cfg.grid[i - 1], "grid must be strictly increasing");
        }
        require(cfg.t0 > 0.0, "sweep needs t0 > 0");
        if (cfg.t_max) require(*cfg.t_max > cfg.t0, "tmax must exceed t0");
        break;
    case Command::field: {
        require(!cfg.times.empty() || cfg.t_max, "field needs times (or tmax)");
        for (double t : cfg.times) require(t >= 0.0 && std::isfinite(t), "times must be >= 0");
        if (cfg.step) {
            const double max_step = max_grid_step(cfg.sys, cfg.pkt);
            require(*cfg.step <= max_step * (1.0 + 1e-12),
                    "step exceeds the resolvable maximum " + std::to_string(max_step));
        }
        const std::size_t n = cfg.times.empty() ? 1 : cfg.times.size();
        require(n == 1 || !cfg.out.empty(), "several field times need --out");
        break;
    }
    case Command::validate:
        require(cfg.t_max.value_or(kDefaultEvolveTMax) > 0.0, "tmax must be > 0");
        break;
    }
}

} // namespace wqed::cli
