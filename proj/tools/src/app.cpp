#include <ctime>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "wqed/cli/commands.hpp"

namespace wqed::cli {

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct Flags {
    std::optional<std::string> config;
    std::optional<double> gamma1d, delta, detuning, nu_s, c0, t0, tmax, dt_out, rd, halfwidth,
        step, band;
    std::optional<std::string> axis, grid, times, out, format;
    std::optional<int> modes;
    std::optional<unsigned> threads;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "flat JSON config file");
    sub->add_option("--gamma1d", f.gamma1d, "emission rate into the waveguide");
    sub->add_option("--delta", f.delta, "packet linewidth");
    sub->add_option("--detuning", f.detuning, "nu_L - nu_S");
    sub->add_option("--nu-s", f.nu_s, "transition frequency");
    sub->add_option("--c0", f.c0, "ground-state amplitude");
    sub->add_option("--t0", f.t0, "start time (evolve) or NM cutoff (sweep)");
    sub->add_option("--tmax", f.tmax, "end time");
    sub->add_option("--dt-out", f.dt_out, "output spacing");
    sub->add_option("--axis", f.axis, "sweep axis: detuning | linewidth");
    sub->add_option("--grid", f.grid, "a,b,c or start:stop:count[:log]");
    sub->add_option("--rd", f.rd, "detector distance");
    sub->add_option("--times", f.times, "snapshot times, comma separated");
    sub->add_option("--halfwidth", f.halfwidth, "field window half-width");
    sub->add_option("--step", f.step, "field grid step");
    sub->add_option("--modes", f.modes, "oracle mode count (odd)");
    sub->add_option("--band", f.band, "oracle band half-width");
    sub->add_option("--threads", f.threads, "sweep workers, 0 = all cores");
    sub->add_option("--out", f.out, "output path; stdout if omitted");
    sub->add_option("--format", f.format, "csv | json");
}

RunConfig build_config(const Flags& f) {
    RunConfig cfg;
    if (f.config) apply_config_file(cfg, *f.config);
    if (f.gamma1d) cfg.sys.gamma_1d = *f.gamma1d;
    if (f.nu_s) cfg.sys.nu_s = *f.nu_s;
    if (f.delta) cfg.pkt.delta = *f.delta;
    if (f.detuning) cfg.pkt.detuning = *f.detuning;
    if (f.c0) cfg.pkt.c0 = *f.c0;
    if (f.t0) cfg.t0 = *f.t0;
    if (f.tmax) cfg.t_max = *f.tmax;
    if (f.dt_out) cfg.dt_out = *f.dt_out;
    if (f.axis) cfg.axis = parse_axis(*f.axis);
    if (f.grid) cfg.grid = parse_grid(*f.grid);
    if (f.rd) cfg.r_d = *f.rd;
    if (f.times) cfg.times = parse_list(*f.times);
    if (f.halfwidth) cfg.halfwidth = *f.halfwidth;
    if (f.step) cfg.step = *f.step;
    if (f.modes) cfg.modes = *f.modes;
    if (f.band) cfg.band = *f.band;
    if (f.threads) cfg.threads = *f.threads;
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = parse_format(*f.format);
    return cfg;
}

std::filesystem::path indexed_path(const std::filesystem::path& out, std::size_t k) {
    auto p = out;
    p.replace_filename(out.stem().string() + "_t" + std::to_string(k) + out.extension().string());
    return p;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sidecar(Command cmd, const RunConfig& cfg, const std::vector<std::filesystem::path>& files,
                    int argc, const char* const* argv) {
    Table meta;
    meta.command = std::string(to_string(cmd)) + ".meta";
    meta.params = config_params(cfg, cmd);
    meta.footer = {{"created_utc", utc_now()},
                   {"format", std::string(to_string(cfg.format))},
                   {"threads", static_cast<long long>(cfg.threads)}};
    std::string line;
    for (int i = 0; i < argc; ++i) line += (i ? " " : "") + std::string(argv[i]);
    meta.footer.emplace_back("argv", line);
    meta.columns = {"file"};
    for (const auto& f : files) meta.rows.push_back({f.filename().string()});
    return to_json(meta);
}

int emit(Command cmd, const RunConfig& cfg, const std::vector<Table>& tables, std::ostream& out,
         int argc, const char* const* argv) {
    if (cfg.out.empty()) {
        for (const auto& t : tables) out << render(t, cfg.format);
        return 0;
    }
    const std::filesystem::path base(cfg.out);
    std::vector<std::filesystem::path> files;
    for (std::size_t k = 0; k < tables.size(); ++k) {
        files.push_back(tables.size() == 1 ? base : indexed_path(base, k));
    }
    for (std::size_t k = 0; k < tables.size(); ++k) write_file(files[k], render(tables[k], cfg.format));
    write_file(sidecar_path(base), sidecar(cmd, cfg, files, argc, argv));
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-photon driven emitter in a 1D waveguide"};
    app.require_subcommand(1);
    Flags flags;
    auto* evolve = app.add_subcommand("evolve", "amplitude, population and rates versus time");
    auto* sweep = app.add_subcommand("sweep", "non-Markovianity over a parameter grid");
    auto* field = app.add_subcommand("field", "real-space field snapshots");
    auto* check = app.add_subcommand("validate", "oracle and identity checks");
    for (auto* s : {evolve, sweep, field, check}) add_flags(s, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    Command cmd = Command::evolve;
    if (sweep->parsed()) cmd = Command::sweep;
    if (field->parsed()) cmd = Command::field;
    if (check->parsed()) cmd = Command::validate;

    try {
        const RunConfig cfg = build_config(flags);
        validate(cfg, cmd);
        if (!rwa_consistent(cfg.sys, cfg.pkt)) {
            err << "warning: nu_s is not well separated from the packet rates (RWA)\n";
        }
        switch (cmd) {
        case Command::evolve:
            return emit(cmd, cfg, {cmd_evolve(cfg)}, out, argc, argv);
        case Command::sweep: {
            auto o = cmd_sweep(cfg);
            for (const auto& e : o.errors) err << "row error: " << e << "\n";
            emit(cmd, cfg, {o.table}, out, argc, argv);
            return o.succeeded > 0 ? 0 : kExitNumerical;
        }
        case Command::field: {
            auto o = cmd_field(cfg);
            for (const auto& w : o.warnings) err << "warning: " << w << "\n";
            return emit(cmd, cfg, o.snapshots, out, argc, argv);
        }
        case Command::validate: {
            auto o = cmd_validate(cfg);
            for (const auto& n : o.notes) err << "note: " << n << "\n";
            emit(cmd, cfg, {o.table}, out, argc, argv);
            return o.all_pass ? 0 : kExitNumerical;
        }
        }
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

} // namespace wqed::cli
