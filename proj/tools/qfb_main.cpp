#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfb/scenario.hpp"

namespace {

using qfb::scenario::ScenarioConfig;

struct Flags {
    std::optional<std::string> config_path, preset, solver, analytic_model, reference, out_dir,
        prefix, format;
    std::optional<double> gamma, tau, coupling, phase, photons, window, substep_target;
    std::optional<long> steps_per_tau, n_intervals, n_modes;
    std::vector<long> modes_sweep;
    bool emitter_excited = false;
    bool no_feedback = false;
    bool dump_correlators = false;
};

void add_common_options(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON scenario file");
    cmd->add_option("--preset", f.preset, "regime preset: long_tau, rabi_tau or short_tau");
    cmd->add_option("--solver", f.solver,
                    "analytic | dde | continuum | hierarchy | factorized | benchmark");
    cmd->add_option("--gamma", f.gamma, "decay / feedback rate");
    cmd->add_option("--tau", f.tau, "roundtrip delay");
    cmd->add_option("--coupling,-M", f.coupling, "emitter-cavity coupling");
    cmd->add_option("--phase", f.phase, "feedback phase in radians");
    cmd->add_option("--photons", f.photons, "seed the cavity with this photon number");
    cmd->add_flag("--emitter-excited", f.emitter_excited, "start from the excited emitter");
    cmd->add_flag("--no-feedback", f.no_feedback, "switch the delayed return off");
    cmd->add_option("--steps-per-tau", f.steps_per_tau, "grid steps per delay interval");
    cmd->add_option("--intervals", f.n_intervals, "number of delay intervals");
    cmd->add_option("--n-modes", f.n_modes, "reservoir modes (continuum solver)");
    cmd->add_option("--window", f.window, "detuning half-width (continuum solver)");
    cmd->add_option("--substep-target", f.substep_target,
                    "window * internal dt bound (continuum solver)");
    cmd->add_option("--analytic-model", f.analytic_model, "mirror | jcm | empty_cavity");
    cmd->add_option("--reference", f.reference, "benchmark comparison solver");
    cmd->add_option("--modes-sweep", f.modes_sweep, "benchmark n_modes table")->delimiter(',');
    cmd->add_option("--out", f.out_dir, "output directory (default $QFB_OUTPUT_DIR or .)");
    cmd->add_option("--prefix", f.prefix, "output file prefix");
    cmd->add_option("--format", f.format, "csv | binary | both");
    cmd->add_flag("--dump-correlators", f.dump_correlators, "dump every correlator block");
}

ScenarioConfig assemble(const Flags& f) {
    nlohmann::json doc = nlohmann::json::object();
    if (f.config_path) {
        std::ifstream in(*f.config_path);
        if (!in) throw qfb::ConfigError("cannot open config file " + *f.config_path);
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw qfb::ConfigError(std::string("config parse: ") + e.what());
        }
    }
    if (f.preset) doc["preset"] = *f.preset;  // expands first, flags below override

    ScenarioConfig config = qfb::scenario::parse_config(doc);

    if (f.solver) config.solver = qfb::scenario::parse_config({{"solver", *f.solver}}).solver;
    if (f.analytic_model)
        config.analytic_model =
            qfb::scenario::parse_config({{"analytic_model", *f.analytic_model}}).analytic_model;
    if (f.reference)
        config.reference =
            qfb::scenario::parse_config({{"benchmark", {{"reference", *f.reference}}}}).reference;
    if (f.gamma) config.params.gamma = *f.gamma;
    if (f.tau) config.params.tau = *f.tau;
    if (f.coupling) config.params.coupling = *f.coupling;
    if (f.phase) config.params.phase = *f.phase;
    if (f.photons) {
        config.cavity_photons = *f.photons;
        config.emitter_excited = false;
    }
    if (f.emitter_excited) config.emitter_excited = true;
    if (f.no_feedback) config.feedback = false;
    if (f.steps_per_tau) config.steps_per_tau = *f.steps_per_tau;
    if (f.n_intervals) config.n_intervals = *f.n_intervals;
    if (f.n_modes) config.n_modes = *f.n_modes;
    if (f.window) config.window = *f.window;
    if (f.substep_target) config.substep_target = *f.substep_target;
    if (!f.modes_sweep.empty()) config.n_modes_sweep = f.modes_sweep;
    if (f.out_dir) config.output_dir = *f.out_dir;
    if (f.prefix) config.prefix = *f.prefix;
    if (f.format) config.format = qfb::scenario::parse_config({{"output", {{"format", *f.format}}}}).format;
    if (f.dump_correlators) config.dump_correlators = true;

    if (config.params.gamma < 0 || config.params.coupling < 0)
        throw qfb::ConfigError("rates must be >= 0");
    if (!(config.params.tau > 0)) throw qfb::ConfigError("tau must be > 0");
    return config;
}

void print_metrics(const qfb::scenario::RunReport& report) {
    std::cout << report.metrics.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qfb: delayed-self-feedback cavity QED simulator"};
    app.require_subcommand(1);

    Flags run_flags, bench_flags, sweep_flags, validate_flags;
    auto* cmd_run = app.add_subcommand("run", "execute one configured solver");
    add_common_options(cmd_run, run_flags);

    auto* cmd_bench = app.add_subcommand("benchmark", "compare a solver against a reference");
    add_common_options(cmd_bench, bench_flags);

    auto* cmd_sweep = app.add_subcommand("sweep", "one run per parameter value");
    add_common_options(cmd_sweep, sweep_flags);
    std::string sweep_axis;
    std::vector<double> sweep_values;
    long sweep_jobs = 1;
    cmd_sweep->add_option("--axis", sweep_axis, "coupling | gamma | tau | phase | photons")
        ->required();
    cmd_sweep->add_option("--values", sweep_values, "comma-separated axis values")
        ->delimiter(',');
    cmd_sweep->add_option("--jobs", sweep_jobs, "concurrent runs");

    auto* cmd_validate = app.add_subcommand("validate", "check a configuration and exit");
    add_common_options(cmd_validate, validate_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            const auto config = assemble(run_flags);
            const auto report = qfb::scenario::run_scenario(config);
            print_metrics(report);
        } else if (cmd_bench->parsed()) {
            auto config = assemble(bench_flags);
            if (config.solver == qfb::scenario::Solver::benchmark)
                config.solver = qfb::scenario::Solver::hierarchy;
            const auto report = qfb::scenario::run_benchmark(config);
            print_metrics(report);
        } else if (cmd_sweep->parsed()) {
            const auto config = assemble(sweep_flags);
            qfb::scenario::SweepSpec spec{sweep_axis, sweep_values, sweep_jobs};
            const auto result = qfb::scenario::run_sweep(config, spec);
            std::cout << "summary: " << result.summary_path.string() << '\n';
            if (result.failures > 0) {
                std::cerr << result.failures << " run(s) failed\n";
                return 1;
            }
        } else if (cmd_validate->parsed()) {
            const auto config = assemble(validate_flags);
            const auto violations = qfb::validate(config.params, config.grid());
            for (const auto& v : violations) std::cerr << v << '\n';
            if (!violations.empty()) return 2;
            std::cout << "ok\n" << qfb::scenario::to_json(config).dump(2) << '\n';
        }
    } catch (const qfb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qfb::NonFiniteState& e) {
        std::cerr << "solver diverged: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
