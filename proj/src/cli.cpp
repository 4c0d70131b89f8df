#include "hent/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hent/entanglement.hpp"
#include "hent/error.hpp"
#include "hent/scenarios.hpp"

namespace hent {

namespace {

struct HelpRequested {
    std::string text;
};

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os << contents;
        os.flush();
        if (!os) throw IoError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

// Pulse instants must coincide with grid points.
void check_pulses_on_grid(const PulseProtocol& p, const TimeGrid& grid) {
    for (double tp : pulse_times(p, grid.t_max())) {
        if (grid.index_of(tp) < 0) {
            throw ConfigError("pulse at t = " + format_number(tp) + " is not on the time grid (step " +
                              format_number(grid.step()) + "); adjust --tmax/--points");
        }
    }
}

}  // namespace

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::MonteCarlo: return "mc";
        case RunMode::Analytic: return "analytic";
        case RunMode::RandomField: return "randomfield";
        case RunMode::JaynesCummings: return "jc";
    }
    return "?";
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Entanglement dynamics of two qubits under local noise and local pulses", "hent"};
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "Flat key = value file; keys are the long flag names");

    std::string mode;
    std::optional<std::string> noise_kind;
    double sigma = 1.0;
    std::optional<double> tau;
    std::string protocol = "free";
    std::optional<double> tbar, dt_pulse;
    std::optional<double> t_max;
    std::optional<std::size_t> points;
    RunConfig cfg;

    app.add_option("--mode", mode, "Engine: mc | analytic | randomfield | jc")
        ->required()
        ->check(CLI::IsMember({"mc", "analytic", "randomfield", "jc"}));
    app.add_option("--noise", noise_kind, "Noise process: static | ou")
        ->check(CLI::IsMember({"static", "ou"}));
    app.add_option("--sigma", sigma, "Noise standard deviation (angular frequency)");
    app.add_option("--tau", tau, "OU correlation time");
    app.add_option("--protocol", protocol, "Control on qubit A: free | echo | pdd")
        ->check(CLI::IsMember({"free", "echo", "pdd"}));
    app.add_option("--tbar", tbar, "Echo pulse time");
    app.add_option("--dt-pulse", dt_pulse, "PDD pulse spacing");
    app.add_option("--tmax", t_max, "Grid end time");
    app.add_option("--points", points, "Number of grid points");
    app.add_option("--ntraj", cfg.n_traj, "Monte Carlo trajectories");
    app.add_option("--seed", cfg.master_seed, "Master seed");
    app.add_option("--output,-o", cfg.output_path, "CSV output path");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = automatic; capped by HENT_THREADS)");
    app.add_option("--omega-a", cfg.omega_a, "Deterministic splitting of qubit A");
    app.add_option("--hb-x", cfg.field_b.x, "Qubit B Hamiltonian, sigma_x component (times 1/2)");
    app.add_option("--hb-y", cfg.field_b.y, "Qubit B Hamiltonian, sigma_y component (times 1/2)");
    app.add_option("--hb-z", cfg.field_b.z, "Qubit B Hamiltonian, sigma_z component (times 1/2)");
    app.add_flag("--stepwise", cfg.stepwise, "Monte Carlo: step-by-step propagator path");
    app.add_option("--g", cfg.g, "Jaynes-Cummings coupling");
    app.add_option("--omega", cfg.omega, "Random-field rotation frequency");
    app.add_option("--cutoff-factor", cfg.quadrature.cutoff_factor, "Analytic: w_max in units of the largest rate");
    app.add_option("--quad-tol", cfg.quadrature.abs_tol, "Analytic: absolute tolerance on the exponent");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    if (mode == "mc") cfg.mode = RunMode::MonteCarlo;
    else if (mode == "analytic") cfg.mode = RunMode::Analytic;
    else if (mode == "randomfield") cfg.mode = RunMode::RandomField;
    else cfg.mode = RunMode::JaynesCummings;

    const bool noisy = cfg.mode == RunMode::MonteCarlo || cfg.mode == RunMode::Analytic;
    if (noisy) {
        if (!noise_kind) throw ConfigError("mode " + mode + " requires `noise` (--noise static|ou)");
        if (!(sigma > 0.0)) throw ConfigError("`sigma` must be positive");
        if (*noise_kind == "ou") {
            if (!tau) throw ConfigError("OU noise requires `tau` (--tau)");
            if (!(*tau > 0.0)) throw ConfigError("`tau` must be positive");
            cfg.noise = NoiseModel{NoiseKind::OrnsteinUhlenbeck, sigma, *tau};
        } else {
            cfg.noise = NoiseModel{NoiseKind::Static, sigma, 0.0};
        }

        if (protocol == "echo") {
            if (!tbar) throw ConfigError("echo protocol requires `tbar` (--tbar)");
            if (!(*tbar > 0.0)) throw ConfigError("`tbar` must be positive");
            cfg.protocol = PulseProtocol::echo(*tbar);
        } else if (protocol == "pdd") {
            if (!dt_pulse) throw ConfigError("pdd protocol requires `dt-pulse` (--dt-pulse)");
            if (!(*dt_pulse > 0.0)) throw ConfigError("`dt-pulse` must be positive");
            cfg.protocol = PulseProtocol::pdd(*dt_pulse);
        } else {
            cfg.protocol = PulseProtocol::free();
        }
        cfg.t_max = t_max.value_or(8.0);
        cfg.points = points.value_or(801);
        if (cfg.mode == RunMode::MonteCarlo && cfg.n_traj == 0) throw ConfigError("`ntraj` must be at least 1");
        if (!(cfg.quadrature.cutoff_factor > 1.0)) throw ConfigError("`cutoff-factor` must exceed 1");
        if (!(cfg.quadrature.abs_tol > 0.0)) throw ConfigError("`quad-tol` must be positive");
    } else if (cfg.mode == RunMode::RandomField) {
        if (!(cfg.omega > 0.0)) throw ConfigError("`omega` must be positive");
        cfg.t_max = t_max.value_or(4.0 * std::numbers::pi / cfg.omega);
        cfg.points = points.value_or(401);
    } else {
        if (!(cfg.g > 0.0)) throw ConfigError("`g` must be positive");
        cfg.t_max = t_max.value_or(2.0 * std::numbers::pi / cfg.g);
        cfg.points = points.value_or(401);
    }

    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) throw ConfigError("`tmax` must be positive");
    if (cfg.points < 2) throw ConfigError("`points` must be at least 2");
    if (noisy) check_pulses_on_grid(cfg.protocol, cfg.grid());
    if (cfg.output_path.empty()) cfg.output_path = std::string("hent_") + mode + ".csv";
    return cfg;
}

EntanglementSeries compute(const RunConfig& cfg) {
    switch (cfg.mode) {
        case RunMode::MonteCarlo: {
            DephasingRun run_cfg;
            run_cfg.noise = *cfg.noise;
            run_cfg.protocol = cfg.protocol;
            run_cfg.grid = cfg.grid();
            run_cfg.n_traj = cfg.n_traj;
            run_cfg.master_seed = cfg.master_seed;
            run_cfg.omega_a = cfg.omega_a;
            run_cfg.field_b = cfg.field_b;
            run_cfg.stepwise = cfg.stepwise;
            run_cfg.threads = cfg.threads;
            return run(run_cfg).series;
        }
        case RunMode::Analytic:
            return analytic_series(*cfg.noise, cfg.protocol, cfg.grid(), cfg.quadrature, cfg.threads);
        case RunMode::RandomField:
            return random_field_series(RandomFieldScenario{cfg.omega, cfg.grid()});
        case RunMode::JaynesCummings:
            return jc_measures(JCScenario{cfg.g, cfg.grid()}).series;
    }
    throw std::logic_error("unknown run mode");
}

std::string manifest_json(const RunConfig& cfg, const EntanglementSeries& series, double wall_seconds) {
    nlohmann::ordered_json config;
    config["mode"] = to_string(cfg.mode);
    if (cfg.noise) {
        config["noise"] = cfg.noise->kind == NoiseKind::Static ? "static" : "ou";
        config["sigma"] = cfg.noise->sigma;
        if (cfg.noise->kind == NoiseKind::OrnsteinUhlenbeck) config["tau"] = cfg.noise->tau;
        config["protocol"] = to_string(cfg.protocol.kind);
        if (cfg.protocol.kind == PulseProtocol::Kind::Echo) config["tbar"] = cfg.protocol.interval;
        if (cfg.protocol.kind == PulseProtocol::Kind::PDD) config["dt-pulse"] = cfg.protocol.interval;
    }
    config["tmax"] = cfg.t_max;
    config["points"] = cfg.points;
    switch (cfg.mode) {
        case RunMode::MonteCarlo:
            config["ntraj"] = cfg.n_traj;
            config["seed"] = cfg.master_seed;
            config["omega-a"] = cfg.omega_a;
            config["hb-x"] = cfg.field_b.x;
            config["hb-y"] = cfg.field_b.y;
            config["hb-z"] = cfg.field_b.z;
            config["stepwise"] = cfg.stepwise;
            break;
        case RunMode::Analytic:
            config["cutoff-factor"] = cfg.quadrature.cutoff_factor;
            config["quad-tol"] = cfg.quadrature.abs_tol;
            break;
        case RunMode::RandomField: config["omega"] = cfg.omega; break;
        case RunMode::JaynesCummings: config["g"] = cfg.g; break;
    }
    config["output"] = cfg.output_path;

    nlohmann::ordered_json doc;
    doc["tool"] = "hent";
    doc["version"] = kToolVersion;
    doc["config"] = config;
    doc["columns"] = csv_columns();
    doc["x"] = series.x_label;
    doc["rows"] = series.size();
    doc["wall_clock_seconds"] = wall_seconds;
    nlohmann::ordered_json sums;
    const auto checks = column_checksums(series);
    for (std::size_t k = 0; k < checks.size(); ++k) sums[csv_columns()[k]] = "fnv1a64:" + hex64(checks[k]);
    doc["checksums"] = sums;
    return doc.dump(2) + "\n";
}

int execute(const RunConfig& cfg, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    EntanglementSeries series;
    try {
        series = compute(cfg);
    } catch (const std::exception& e) {
        err << "hent: numerical failure in " << to_string(cfg.mode) << " run: " << e.what() << "\n";
        return kExitNumerical;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        write_atomically(cfg.output_path, to_csv(series));
        write_atomically(cfg.output_path + ".manifest.json", manifest_json(cfg, series, wall));
    } catch (const IoError& e) {
        err << "hent: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "hent: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "hent: configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
    const int code = execute(cfg, err);
    if (code == kExitOk) out << "wrote " << cfg.output_path << "\n";
    return code;
}

}  // namespace hent
