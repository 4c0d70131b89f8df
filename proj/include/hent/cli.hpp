#pragma once

// Batch front end: parse a run configuration (flags and/or a flat
// `key = value` file), dispatch to an engine, write the CSV series and a
// JSON manifest.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hent/dephasing.hpp"
#include "hent/filter.hpp"
#include "hent/noise.hpp"
#include "hent/pulse.hpp"
#include "hent/series.hpp"

namespace hent {

inline constexpr const char* kToolVersion = "1.0.0";

enum class RunMode { MonteCarlo, Analytic, RandomField, JaynesCummings };

const char* to_string(RunMode mode);

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

struct RunConfig {
    RunMode mode = RunMode::MonteCarlo;
    std::optional<NoiseModel> noise;
    PulseProtocol protocol;
    double t_max = 8.0;
    std::size_t points = 801;
    std::size_t n_traj = 100000;
    std::uint64_t master_seed = 0;
    std::string output_path;
    unsigned threads = 0;
    double omega_a = 0.0;
    LocalField field_b;
    bool stepwise = false;
    double g = 1.0;      // jc
    double omega = 1.0;  // randomfield
    QuadratureOptions quadrature;

    TimeGrid grid() const { return TimeGrid(t_max, points); }
};

/// Parses command-line style arguments (without the program name). A
/// `--config FILE` argument loads `key = value` lines first; flags given on
/// the command line override file values. Every invariant is checked before
/// returning. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the configured engine without touching the filesystem.
EntanglementSeries compute(const RunConfig& config);

/// Manifest document (JSON text) for a finished run.
std::string manifest_json(const RunConfig& config, const EntanglementSeries& series, double wall_seconds);

/// compute() then write the CSV and `<output>.manifest.json`, each through
/// a temporary file and rename. Returns an ExitCode; diagnostics go to `err`.
int execute(const RunConfig& config, std::ostream& err);

/// Full CLI: parse, execute, map exceptions to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hent
