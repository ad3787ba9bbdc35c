#include "wqed/cli/output.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace wqed::cli {

namespace {

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
    return out;
}

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\n\"") != std::string::npos) {
        throw std::logic_error("csv cell cannot hold '" + s + "'");
    }
    return s;
}

std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? format_double(*d) : std::string("null");
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return json_escape(std::get<std::string>(c));
}

std::string json_object(const KeyValues& kv) {
    std::string out = "{";
    for (std::size_t i = 0; i < kv.size(); ++i) {
        if (i > 0) out += ", ";
        out += json_escape(kv[i].first) + ": " + json_cell(kv[i].second);
    }
    return out + "}";
}

Cell parse_cell(std::string_view tok) {
    if (tok == "nan" || tok == "-nan") return std::nan("");
    if (tok == "inf") return HUGE_VAL;
    if (tok == "-inf") return -HUGE_VAL;
    const bool looks_float = tok.find_first_of("eE.") != std::string_view::npos;
    const char* end = tok.data() + tok.size();
    if (looks_float) {
        double v = 0.0;
        const auto [p, ec] = std::from_chars(tok.data(), end, v);
        if (ec == std::errc{} && p == end) return v;
    } else {
        long long v = 0;
        const auto [p, ec] = std::from_chars(tok.data(), end, v);
        if (ec == std::errc{} && p == end && !tok.empty()) return v;
    }
    return std::string(tok);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(',', pos);
        out.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += csv_cell(row[i]);
        }
        out += '\n';
    }
    for (const auto& [k, v] : t.footer) out += "# " + k + "," + csv_cell(v) + "\n";
    return out;
}

std::string to_json(const Table& t) {
    std::string out = "{\n  \"schema\": {\"name\": " + json_escape("wqed." + t.command) +
                      ", \"version\": " + std::to_string(kSchemaVersion) + ", \"columns\": [";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) out += ", ";
        out += json_escape(t.columns[i]);
    }
    out += "]},\n  \"params\": " + json_object(t.params) + ",\n  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += r == 0 ? "\n    [" : ",\n    [";
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i > 0) out += ", ";
            out += json_cell(t.rows[r][i]);
        }
        out += "]";
    }
    out += t.rows.empty() ? "],\n" : "\n  ],\n";
    out += "  \"footer\": " + json_object(t.footer) + "\n}\n";
    return out;
}

std::string render(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

Table parse_csv(std::string_view text) {
    Table t;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (header) {
            for (auto c : split_commas(line)) t.columns.emplace_back(c);
            header = false;
        } else if (line.starts_with("# ")) {
            const auto body = line.substr(2);
            const auto comma = body.find(',');
            t.footer.emplace_back(std::string(body.substr(0, comma)),
                                  parse_cell(comma == std::string_view::npos ? std::string_view{}
                                                                             : body.substr(comma + 1)));
        } else {
            std::vector<Cell> row;
            for (auto c : split_commas(line)) row.push_back(parse_cell(c));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + ": " + std::strerror(errno));
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot create " + path.string());
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
    auto p = out;
    p += ".meta.json";
    return p;
}

KeyValues config_params(const RunConfig& cfg, Command cmd) {
    KeyValues kv{
        {"units", std::string("gamma_1d = 1 units")},
        {"gamma1d", cfg.sys.gamma_1d},
        {"nu_s", cfg.sys.nu_s},
        {"delta", cfg.pkt.delta},
        {"detuning", cfg.pkt.detuning},
        {"c0", cfg.pkt.c0},
        {"t0", cfg.t0},
    };
    if (cfg.t_max) kv.emplace_back("tmax", *cfg.t_max);
    switch (cmd) {
    case Command::evolve:
        kv.emplace_back("tmax_used", cfg.t_max.value_or(kDefaultEvolveTMax));
        kv.emplace_back("dt_out", cfg.dt_out);
        break;
    case Command::sweep:
        kv.emplace_back("axis", std::string(to_string(cfg.axis)));
        break;
    case Command::field:
        if (cfg.halfwidth) kv.emplace_back("halfwidth", *cfg.halfwidth);
        if (cfg.step) kv.emplace_back("step", *cfg.step);
        if (cfg.r_d) kv.emplace_back("rd", *cfg.r_d);
        break;
    case Command::validate:
        if (cfg.r_d) kv.emplace_back("rd", *cfg.r_d);
        if (cfg.band) kv.emplace_back("band", *cfg.band);
        if (cfg.modes) kv.emplace_back("modes", static_cast<long long>(*cfg.modes));
        break;
    }
    return kv;
}

} // namespace wqed::cli
