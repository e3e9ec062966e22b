#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfb/types.hpp"

namespace qfb::scenario {

enum class Solver { analytic, dde, continuum, hierarchy, factorized, benchmark };
enum class AnalyticModel { mirror, jcm, empty_cavity };
enum class OutputFormat { csv, binary, both };

[[nodiscard]] std::string to_string(Solver s);
[[nodiscard]] std::string to_string(AnalyticModel m);
[[nodiscard]] std::string to_string(OutputFormat f);

struct ScenarioConfig {
    Solver solver = Solver::hierarchy;
    std::string preset;  // empty, or one of long_tau / rabi_tau / short_tau
    ModelParams params{1.0, 1.0, 0.0, 0.0};
    long steps_per_tau = 1000;
    long n_intervals = 10;

    bool emitter_excited = true;
    double cavity_photons = 0.0;
    bool feedback = true;

    AnalyticModel analytic_model = AnalyticModel::mirror;

    long n_modes = 2001;
    double window = 0.0;  // <= 0: auto, 20 * 2pi / tau scaled with (n_modes - 1) / 2000
    double substep_target = 0.015;

    Solver reference = Solver::dde;  // benchmark comparison partner
    std::vector<long> n_modes_sweep;  // optional continuum resolution table

    std::filesystem::path output_dir;  // empty: $QFB_OUTPUT_DIR or "."
    std::string prefix = "run";
    OutputFormat format = OutputFormat::csv;
    bool dump_correlators = false;

    [[nodiscard]] TimeGrid grid() const { return {params.tau, steps_per_tau, n_intervals}; }
    [[nodiscard]] double effective_window() const;
    [[nodiscard]] std::filesystem::path resolved_output_dir() const;
};

/// Fill model/grid fields from a named regime preset (delay times of 4, 1 and
/// 0.1 exchange periods at coupling = gamma = 1).
void apply_preset(ScenarioConfig& config, const std::string& name);

/// Parse and validate a JSON document; unknown solver names, malformed fields
/// and inconsistent grids raise ConfigError with the offending field.
[[nodiscard]] ScenarioConfig parse_config(const nlohmann::json& doc);

/// Full round-trippable echo: parse_config(to_json(c)) reproduces c.
[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& config);

struct OutputFile {
    std::string path;
    std::string digest;
    std::uintmax_t bytes = 0;
};

struct RunReport {
    nlohmann::json config_echo;
    double wall_ms = 0.0;
    std::vector<OutputFile> outputs;
    nlohmann::json metrics;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Execute the configured solver and write its trajectory files plus a
/// <prefix>_report.json. Trajectory bytes are deterministic for a fixed
/// config; wall time is segregated in the report.
RunReport run_scenario(const ScenarioConfig& config);

/// Run the solver and its reference on the shared grid and report deviation
/// statistics plus the late-window stabilization metric.
RunReport run_benchmark(const ScenarioConfig& config);

struct SweepSpec {
    std::string axis;  // coupling | gamma | tau | phase | photons
    std::vector<double> values;
    long jobs = 1;
};

struct SweepResult {
    long failures = 0;
    std::filesystem::path summary_path;
};

/// One run per axis value, isolated failures, summary CSV ordered by value
/// index. Runs execute concurrently up to spec.jobs.
SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec);

}  // namespace qfb::scenario
