#include "qfb/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "qfb/analysis.hpp"
#include "qfb/analytic.hpp"
#include "qfb/continuum.hpp"
#include "qfb/dde.hpp"
#include "qfb/factorized.hpp"
#include "qfb/hierarchy.hpp"
#include "qfb/io.hpp"

namespace qfb::scenario {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// enum <-> string
// ---------------------------------------------------------------------------

Solver solver_from(const std::string& name) {
    if (name == "analytic") return Solver::analytic;
    if (name == "dde") return Solver::dde;
    if (name == "continuum") return Solver::continuum;
    if (name == "hierarchy") return Solver::hierarchy;
    if (name == "factorized") return Solver::factorized;
    if (name == "benchmark") return Solver::benchmark;
    throw ConfigError("unknown solver '" + name + "'");
}

AnalyticModel analytic_model_from(const std::string& name) {
    if (name == "mirror") return AnalyticModel::mirror;
    if (name == "jcm") return AnalyticModel::jcm;
    if (name == "empty_cavity") return AnalyticModel::empty_cavity;
    throw ConfigError("unknown analytic_model '" + name + "'");
}

OutputFormat format_from(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "binary") return OutputFormat::binary;
    if (name == "both") return OutputFormat::both;
    throw ConfigError("unknown output format '" + name + "'");
}

template <typename T>
T field(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Solver execution
// ---------------------------------------------------------------------------

struct SolverOutput {
    ComplexTrajectory photon;
    ComplexTrajectory emitter;
    std::vector<std::pair<std::string, ComplexTrajectory>> channels;
    std::vector<double> primary;  ///< comparison trace for benchmarks
    std::string primary_name;
    json metrics;
    std::vector<hierarchy::CorrelatorBlock> blocks;
};

dde::LinearDdeSystem wavefunction_system(const ModelParams& p, bool feedback) {
    dde::LinearDdeSystem sys;
    const cplx gt = feedback ? p.gamma_tau() : cplx(0.0, 0.0);
    if (p.coupling > 0.0) {
        const cplx iM(0.0, p.coupling);
        sys.dim = 2;
        sys.instantaneous = {cplx(0, 0), -iM, -iM, cplx(-p.gamma, 0)};
        sys.delayed = {cplx(0, 0), cplx(0, 0), cplx(0, 0), gt};
        sys.initial_state = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    } else {
        sys.dim = 1;
        sys.instantaneous = {cplx(-p.gamma, 0.0)};
        sys.delayed = {gt};
        sys.initial_state = {cplx(1.0, 0.0)};
    }
    sys.tau = p.tau;
    return sys;
}

ComplexTrajectory zeros_like(std::size_t n, double dt) {
    return ComplexTrajectory(0.0, dt, std::vector<cplx>(n, cplx(0.0, 0.0)));
}

std::vector<double> modulus(const ComplexTrajectory& tr) {
    std::vector<double> out;
    out.reserve(tr.size());
    for (const auto& v : tr.values()) out.push_back(std::abs(v));
    return out;
}

std::vector<double> modulus_sq(const ComplexTrajectory& tr) {
    std::vector<double> out;
    out.reserve(tr.size());
    for (const auto& v : tr.values()) out.push_back(std::norm(v));
    return out;
}

ComplexTrajectory from_real(const std::vector<double>& y, double dt) {
    std::vector<cplx> v;
    v.reserve(y.size());
    for (double x : y) v.emplace_back(x, 0.0);
    return ComplexTrajectory(0.0, dt, std::move(v));
}

SolverOutput execute_analytic(const ScenarioConfig& config) {
    const TimeGrid grid = config.grid();
    SolverOutput out;
    const double dt = grid.dt();
    switch (config.analytic_model) {
        case AnalyticModel::mirror: {
            std::vector<cplx> amp;
            for (long s = 0; s <= grid.total_steps(); ++s)
                amp.push_back(analytic::mirror_emitter_amplitude(config.params, grid.time_of(s)));
            ComplexTrajectory tr(0.0, dt, std::move(amp));
            out.primary = modulus(tr);
            out.primary_name = "emitter_amplitude_modulus";
            out.emitter = from_real(modulus_sq(tr), dt);
            out.photon = zeros_like(tr.size(), dt);
            out.channels.emplace_back("emitter_amplitude", std::move(tr));
            break;
        }
        case AnalyticModel::jcm: {
            std::vector<cplx> amp;
            for (long s = 0; s <= grid.total_steps(); ++s)
                amp.push_back(analytic::jcm_ground_amplitude(config.params, grid.time_of(s)));
            ComplexTrajectory tr(0.0, dt, std::move(amp));
            out.primary = modulus_sq(tr);
            out.primary_name = "photon_number";
            out.photon = from_real(out.primary, dt);
            out.emitter = zeros_like(tr.size(), dt);  // not covered by the closed form
            out.channels.emplace_back("cavity_amplitude", std::move(tr));
            break;
        }
        case AnalyticModel::empty_cavity: {
            if (config.n_intervals > 2)
                throw ConfigError(
                    "analytic empty_cavity covers two delay intervals; grid.n_intervals <= 2");
            std::vector<double> n;
            for (long s = 0; s < grid.total_steps(); ++s)  // domain is [0, 2 tau)
                n.push_back(analytic::empty_cavity_photon_number(
                    config.params, config.cavity_photons, grid.time_of(s)));
            out.primary = n;
            out.primary_name = "photon_number";
            out.photon = from_real(n, dt);
            out.emitter = zeros_like(n.size(), dt);
            break;
        }
    }
    return out;
}

SolverOutput execute_dde(const ScenarioConfig& config) {
    const TimeGrid grid = config.grid();
    auto sys = wavefunction_system(config.params, config.feedback);
    SolverOutput out;
    out.metrics["step_size_warning"] = dde::step_size_warning(sys, grid);
    auto chans = dde::integrate(sys, grid);
    const double dt = grid.dt();
    if (sys.dim == 2) {
        out.primary = modulus_sq(chans[1]);
        out.primary_name = "photon_number";
        out.photon = from_real(out.primary, dt);
        out.emitter = from_real(modulus_sq(chans[0]), dt);
        out.channels.emplace_back("emitter_amplitude", std::move(chans[0]));
        out.channels.emplace_back("cavity_amplitude", std::move(chans[1]));
    } else {
        out.primary = modulus(chans[0]);
        out.primary_name = "emitter_amplitude_modulus";
        out.emitter = from_real(modulus_sq(chans[0]), dt);
        out.photon = zeros_like(chans[0].size(), dt);
        out.channels.emplace_back("emitter_amplitude", std::move(chans[0]));
    }
    return out;
}

SolverOutput execute_continuum(const ScenarioConfig& config) {
    const TimeGrid grid = config.grid();
    auto modes = continuum::build_modes(config.params.gamma, config.params.tau,
                                        static_cast<std::size_t>(config.n_modes),
                                        config.effective_window(), config.params.phase);
    SolverOutput out;
    const double dt = grid.dt();
    if (config.params.coupling > 0.0) {
        auto run = continuum::evolve_jcm(modes, config.params.coupling, grid,
                                         config.substep_target);
        out.metrics["norm_deviation"] = run.max_norm_deviation;
        out.metrics["substeps_per_sample"] = run.substeps_per_sample;
        out.primary = modulus_sq(run.cavity);
        out.primary_name = "photon_number";
        out.photon = from_real(out.primary, dt);
        out.emitter = from_real(modulus_sq(run.emitter), dt);
        out.channels.emplace_back("emitter_amplitude", std::move(run.emitter));
        out.channels.emplace_back("cavity_amplitude", std::move(run.cavity));
    } else {
        auto run = continuum::evolve_emitter_only(modes, grid, config.substep_target);
        out.metrics["norm_deviation"] = run.max_norm_deviation;
        out.metrics["substeps_per_sample"] = run.substeps_per_sample;
        out.primary = modulus(run.emitter);
        out.primary_name = "emitter_amplitude_modulus";
        out.emitter = from_real(modulus_sq(run.emitter), dt);
        out.photon = zeros_like(run.emitter.size(), dt);
        out.channels.emplace_back("emitter_amplitude", std::move(run.emitter));
    }
    out.metrics["window"] = modes.window;
    out.metrics["mode_spacing"] = modes.mode_spacing;
    out.metrics["gamma_check"] = modes.gamma_check();
    out.metrics["poincare_horizon"] = modes.poincare_horizon();
    return out;
}

hierarchy::InitialState initial_from(const ScenarioConfig& config) {
    if (config.emitter_excited) return hierarchy::InitialState::excited_emitter();
    return hierarchy::InitialState::cavity_fock(config.cavity_photons);
}

SolverOutput execute_hierarchy(const ScenarioConfig& config) {
    const TimeGrid grid = config.grid();
    hierarchy::Options opts;
    opts.feedback = config.feedback;
    opts.keep_blocks = config.dump_correlators;
    auto run = hierarchy::run(config.params, grid, initial_from(config), opts);
    SolverOutput out;
    out.metrics["memory_budget"] = run.budget_at_entry;
    out.metrics["max_imag_residue"] =
        std::max(analysis::max_imag(run.photon_number), analysis::max_imag(run.emitter_population));
    out.primary = analysis::real_part(run.photon_number);
    out.primary_name = "photon_number";
    out.blocks = std::move(run.blocks);
    out.photon = std::move(run.photon_number);
    out.emitter = std::move(run.emitter_population);
    return out;
}

SolverOutput execute_factorized(const ScenarioConfig& config) {
    const TimeGrid grid = config.grid();
    factorized::Options opts;
    opts.feedback = config.feedback;
    opts.keep_blocks = config.dump_correlators;
    auto run = factorized::run(config.params, grid, initial_from(config), opts);
    SolverOutput out;
    out.primary = analysis::real_part(run.photon_number);
    out.primary_name = "photon_number";
    out.blocks = std::move(run.blocks);
    out.photon = std::move(run.photon_number);
    out.emitter = std::move(run.emitter_population);
    out.channels.emplace_back("polarization", std::move(run.polarization));
    return out;
}

SolverOutput execute(const ScenarioConfig& config, Solver solver) {
    switch (solver) {
        case Solver::analytic: return execute_analytic(config);
        case Solver::dde: return execute_dde(config);
        case Solver::continuum: return execute_continuum(config);
        case Solver::hierarchy: return execute_hierarchy(config);
        case Solver::factorized: return execute_factorized(config);
        case Solver::benchmark: break;
    }
    throw ConfigError("benchmark is not a directly executable solver here");
}

void add_final_values(SolverOutput& out) {
    if (!out.photon.empty()) out.metrics["final_photon"] = out.photon.values().back().real();
    if (!out.emitter.empty()) out.metrics["final_emitter"] = out.emitter.values().back().real();
}

std::vector<OutputFile> write_outputs(const ScenarioConfig& config, SolverOutput& out) {
    namespace fs = std::filesystem;
    std::vector<OutputFile> files;
    const fs::path dir = config.resolved_output_dir();
    auto record = [&files](const fs::path& p) {
        files.push_back({p.string(), io::file_digest(p), fs::file_size(p)});
    };

    const bool csv = config.format != OutputFormat::binary;
    const bool binary = config.format != OutputFormat::csv;

    if (!out.photon.empty() && !out.emitter.empty() && csv) {
        const fs::path p = dir / (config.prefix + "_observables.csv");
        io::write_csv_wide(p, out.photon, out.emitter);
        record(p);
    }
    if (csv)
        for (const auto& [name, tr] : out.channels) {
            const fs::path p = dir / (config.prefix + "_" + name + ".csv");
            io::write_csv_channel(p, tr);
            record(p);
        }
    if (binary) {
        std::vector<std::string> names;
        std::vector<const ComplexTrajectory*> ptrs;
        if (!out.photon.empty()) {
            names.push_back("photon_number");
            ptrs.push_back(&out.photon);
        }
        if (!out.emitter.empty()) {
            names.push_back("emitter_population");
            ptrs.push_back(&out.emitter);
        }
        for (const auto& [name, tr] : out.channels) {
            names.push_back(name);
            ptrs.push_back(&tr);
        }
        const fs::path p = dir / (config.prefix + "_dump.bin");
        io::write_binary_dump(p, names, ptrs);
        record(p);
        record(fs::path(p.string() + ".manifest.json"));
    }
    if (config.dump_correlators && !out.blocks.empty()) {
        std::vector<std::string> names;
        std::vector<const ComplexTrajectory*> ptrs;
        std::vector<ComplexTrajectory> storage;
        storage.reserve(out.blocks.size() * 16);
        static const char* fam_names[4] = {"cc", "Pc", "cP", "PP"};
        for (const auto& block : out.blocks)
            for (std::size_t ch = 0; ch < block.channels.size(); ++ch)
                storage.emplace_back(block.start_time, block.dt, block.channels[ch]);
        std::size_t at = 0;
        for (const auto& block : out.blocks)
            for (std::size_t ch = 0; ch < block.channels.size(); ++ch) {
                names.push_back("i" + std::to_string(block.interval) + "." +
                                fam_names[ch % 4] + ".j" + std::to_string(ch / 4));
                ptrs.push_back(&storage[at++]);
            }
        const fs::path p = dir / (config.prefix + "_correlators.bin");
        io::write_binary_dump(p, names, ptrs);
        record(p);
        record(fs::path(p.string() + ".manifest.json"));
    }
    return files;
}

void write_report(const ScenarioConfig& config, const RunReport& report,
                  const std::string& suffix) {
    const auto path = config.resolved_output_dir() / (config.prefix + suffix);
    std::ofstream outstream(path);
    if (!outstream) throw Error("cannot write report " + path.string());
    outstream << report.to_json().dump(2) << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------------

std::string to_string(Solver s) {
    switch (s) {
        case Solver::analytic: return "analytic";
        case Solver::dde: return "dde";
        case Solver::continuum: return "continuum";
        case Solver::hierarchy: return "hierarchy";
        case Solver::factorized: return "factorized";
        case Solver::benchmark: return "benchmark";
    }
    return "?";
}

std::string to_string(AnalyticModel m) {
    switch (m) {
        case AnalyticModel::mirror: return "mirror";
        case AnalyticModel::jcm: return "jcm";
        case AnalyticModel::empty_cavity: return "empty_cavity";
    }
    return "?";
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::binary: return "binary";
        case OutputFormat::both: return "both";
    }
    return "?";
}

double ScenarioConfig::effective_window() const {
    if (window > 0.0) return window;
    const double base = 20.0 * 2.0 * M_PI / params.tau;
    const double scale = static_cast<double>(n_modes - 1) / 2000.0;
    return base * std::max(scale, 1.0);
}

std::filesystem::path ScenarioConfig::resolved_output_dir() const {
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv("QFB_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void apply_preset(ScenarioConfig& config, const std::string& name) {
    double periods = 0.0;
    if (name == "long_tau")
        periods = 4.0;
    else if (name == "rabi_tau")
        periods = 1.0;
    else if (name == "short_tau")
        periods = 0.1;
    else
        throw ConfigError("unknown preset '" + name + "'");
    config.preset = name;
    config.params.gamma = 1.0;
    config.params.coupling = 1.0;
    config.params.phase = 0.0;
    config.params.tau = 2.0 * M_PI * periods / config.params.coupling;
    config.steps_per_tau = 2000;
    config.n_intervals = 12;
    config.emitter_excited = true;
    config.cavity_photons = 0.0;
}

ScenarioConfig parse_config(const json& doc) {
    ScenarioConfig config;
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    if (doc.contains("preset") && doc.at("preset").is_string() &&
        !doc.at("preset").get<std::string>().empty())
        apply_preset(config, doc.at("preset").get<std::string>());

    config.solver = solver_from(field<std::string>(doc, "solver", to_string(config.solver)));

    if (doc.contains("model")) {
        const auto& m = doc.at("model");
        config.params.gamma = field<double>(m, "gamma", config.params.gamma);
        config.params.tau = field<double>(m, "tau", config.params.tau);
        config.params.coupling = field<double>(m, "coupling", config.params.coupling);
        config.params.phase = field<double>(m, "phase", config.params.phase);
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        config.n_intervals = field<long>(g, "n_intervals", config.n_intervals);
        if (g.contains("dt")) {
            try {
                config.steps_per_tau =
                    TimeGrid::from_dt(config.params.tau, g.at("dt").get<double>(),
                                      std::max(config.n_intervals, 1L))
                        .steps_per_tau();
            } catch (const Error& e) {
                throw ConfigError(std::string("field 'grid.dt': ") + e.what());
            }
        }
        config.steps_per_tau = field<long>(g, "steps_per_tau", config.steps_per_tau);
    }
    if (doc.contains("initial")) {
        const auto& ini = doc.at("initial");
        config.cavity_photons = field<double>(ini, "cavity_photons", config.cavity_photons);
        config.emitter_excited =
            field<bool>(ini, "emitter_excited", config.cavity_photons > 0.0 ? false : true);
    }
    config.feedback = field<bool>(doc, "feedback", config.feedback);
    config.analytic_model = analytic_model_from(
        field<std::string>(doc, "analytic_model", to_string(config.analytic_model)));

    if (doc.contains("continuum")) {
        const auto& c = doc.at("continuum");
        config.n_modes = field<long>(c, "n_modes", config.n_modes);
        config.window = field<double>(c, "window", config.window);
        config.substep_target = field<double>(c, "substep_target", config.substep_target);
    }
    if (doc.contains("benchmark")) {
        const auto& b = doc.at("benchmark");
        config.reference =
            solver_from(field<std::string>(b, "reference", to_string(config.reference)));
        config.n_modes_sweep = field<std::vector<long>>(b, "n_modes_sweep", {});
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        config.output_dir = field<std::string>(o, "dir", config.output_dir.string());
        config.prefix = field<std::string>(o, "prefix", config.prefix);
        config.format = format_from(field<std::string>(o, "format", to_string(config.format)));
        config.dump_correlators = field<bool>(o, "dump_correlators", config.dump_correlators);
    }

    if (!(config.params.tau > 0.0)) throw ConfigError("model.tau must be > 0");
    if (config.params.gamma < 0.0) throw ConfigError("model.gamma must be >= 0");
    if (config.params.coupling < 0.0) throw ConfigError("model.coupling must be >= 0");
    if (config.steps_per_tau < 1) throw ConfigError("grid.steps_per_tau must be >= 1");
    if (config.n_intervals < 1) throw ConfigError("grid.n_intervals must be >= 1");
    if (config.n_modes < 2) throw ConfigError("continuum.n_modes must be >= 2");
    if (config.cavity_photons < 0.0) throw ConfigError("initial.cavity_photons must be >= 0");
    return config;
}

json to_json(const ScenarioConfig& config) {
    json doc;
    doc["solver"] = to_string(config.solver);
    if (!config.preset.empty()) doc["preset"] = config.preset;
    doc["model"] = {{"gamma", config.params.gamma},
                    {"tau", config.params.tau},
                    {"coupling", config.params.coupling},
                    {"phase", config.params.phase}};
    doc["grid"] = {{"steps_per_tau", config.steps_per_tau}, {"n_intervals", config.n_intervals}};
    doc["initial"] = {{"emitter_excited", config.emitter_excited},
                      {"cavity_photons", config.cavity_photons}};
    doc["feedback"] = config.feedback;
    doc["analytic_model"] = to_string(config.analytic_model);
    doc["continuum"] = {{"n_modes", config.n_modes},
                        {"window", config.window},
                        {"substep_target", config.substep_target}};
    doc["benchmark"] = {{"reference", to_string(config.reference)},
                        {"n_modes_sweep", config.n_modes_sweep}};
    doc["output"] = {{"dir", config.output_dir.string()},
                     {"prefix", config.prefix},
                     {"format", to_string(config.format)},
                     {"dump_correlators", config.dump_correlators}};
    return doc;
}

json RunReport::to_json() const {
    json doc;
    doc["config"] = config_echo;
    doc["wall_ms"] = wall_ms;
    doc["metrics"] = metrics;
    json out = json::array();
    for (const auto& f : outputs)
        out.push_back({{"path", f.path}, {"digest", f.digest}, {"bytes", f.bytes}});
    doc["outputs"] = out;
    return doc;
}

RunReport run_scenario(const ScenarioConfig& config) {
    if (config.solver == Solver::benchmark) return run_benchmark(config);
    const auto t0 = std::chrono::steady_clock::now();
    auto out = execute(config, config.solver);
    add_final_values(out);

    RunReport report;
    report.config_echo = to_json(config);
    report.outputs = write_outputs(config, out);
    report.metrics = out.metrics;
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t0)
                         .count();
    write_report(config, report, "_report.json");
    return report;
}

RunReport run_benchmark(const ScenarioConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig lhs = config;
    lhs.solver = config.solver == Solver::benchmark ? Solver::hierarchy : config.solver;
    ScenarioConfig rhs = config;
    rhs.solver = config.reference;

    auto a = execute(lhs, lhs.solver);
    auto b = execute(rhs, rhs.solver);
    if (a.primary.size() != b.primary.size())
        throw GridMismatch("benchmark solvers produced different sample counts");

    RunReport report;
    report.config_echo = to_json(config);
    report.metrics["solver"] = to_string(lhs.solver);
    report.metrics["reference"] = to_string(rhs.solver);
    report.metrics["compared"] = a.primary_name;

    const auto dev = analysis::deviation_stats(a.primary, b.primary);
    const TimeGrid grid = config.grid();
    report.metrics["max_deviation"] = dev.max;
    report.metrics["mean_deviation"] = dev.mean;
    report.metrics["argmax_time"] = grid.time_of(dev.argmax);

    // Stabilization of the late-window oscillation maxima.
    if (grid.n_intervals() > 8) {
        const long first = 8 * grid.steps_per_tau();
        const long last = std::min(grid.total_steps(), 12 * grid.steps_per_tau());
        auto peaks = analysis::local_maxima(a.primary, 0.0, grid.dt(), first, last);
        report.metrics["stabilization_peaks"] = peaks.size();
        report.metrics["stabilization_cv"] = analysis::coefficient_of_variation(peaks);
    }

    // Optional resolution table against the same reference trace.
    if (lhs.solver == Solver::continuum && !config.n_modes_sweep.empty()) {
        json table = json::array();
        for (long n : config.n_modes_sweep) {
            ScenarioConfig step = lhs;
            step.n_modes = n;
            step.window = 0.0;  // auto-scale with the mode count
            auto trace = execute(step, Solver::continuum);
            const auto sdev = analysis::deviation_stats(trace.primary, b.primary);
            table.push_back({{"n_modes", n},
                             {"window", step.effective_window()},
                             {"max_deviation", sdev.max},
                             {"mean_deviation", sdev.mean}});
        }
        report.metrics["n_modes_table"] = table;
    }

    if (config.format != OutputFormat::binary) {
        const auto dir = config.resolved_output_dir();
        const auto path = dir / (config.prefix + "_comparison.csv");
        std::filesystem::create_directories(dir);
        std::ofstream cmp(path);
        if (!cmp) throw Error("cannot write " + path.string());
        cmp << "t," << to_string(lhs.solver) << ',' << to_string(rhs.solver) << ",deviation\n";
        char buf[128];
        for (std::size_t s = 0; s < a.primary.size(); ++s) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                          grid.time_of(static_cast<long>(s)), a.primary[s], b.primary[s],
                          std::abs(a.primary[s] - b.primary[s]));
            cmp << buf;
        }
        cmp.close();
        report.outputs.push_back(
            {path.string(), io::file_digest(path), std::filesystem::file_size(path)});
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t0)
                         .count();
    write_report(config, report, "_benchmark_report.json");
    return report;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec) {
    if (spec.values.empty()) throw ConfigError("sweep needs at least one value");

    enum class Axis { coupling, gamma, tau, phase, photons };
    Axis axis;
    if (spec.axis == "coupling" || spec.axis == "M")
        axis = Axis::coupling;
    else if (spec.axis == "gamma")
        axis = Axis::gamma;
    else if (spec.axis == "tau")
        axis = Axis::tau;
    else if (spec.axis == "phase")
        axis = Axis::phase;
    else if (spec.axis == "photons" || spec.axis == "N0")
        axis = Axis::photons;
    else
        throw ConfigError("unknown sweep axis '" + spec.axis + "'");

    struct Row {
        double value;
        bool ok = false;
        std::string error;
        json metrics;
    };
    std::vector<Row> rows(spec.values.size());

    auto worker_run = [&](std::size_t k) {
        Row& row = rows[k];
        row.value = spec.values[k];
        ScenarioConfig c = base;
        switch (axis) {
            case Axis::coupling: c.params.coupling = row.value; break;
            case Axis::gamma: c.params.gamma = row.value; break;
            case Axis::tau: c.params.tau = row.value; break;
            case Axis::phase: c.params.phase = row.value; break;
            case Axis::photons:
                c.cavity_photons = row.value;
                c.emitter_excited = false;
                break;
        }
        c.output_dir = base.resolved_output_dir() /
                       (base.prefix + "_" + spec.axis + "_" + std::to_string(k));
        try {
            const auto report = run_scenario(c);
            row.metrics = report.metrics;
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const long jobs = std::max(1L, std::min<long>(spec.jobs,
                                                  static_cast<long>(spec.values.size())));
    if (jobs == 1) {
        for (std::size_t k = 0; k < spec.values.size(); ++k) worker_run(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (long w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < spec.values.size();
                     k = next.fetch_add(1))
                    worker_run(k);
            });
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    const auto dir = base.resolved_output_dir();
    std::filesystem::create_directories(dir);
    result.summary_path = dir / (base.prefix + "_sweep_summary.csv");
    std::ofstream summary(result.summary_path);
    if (!summary) throw Error("cannot write " + result.summary_path.string());
    summary << spec.axis << ",status,final_photon,final_emitter,max_deviation,error\n";
    char buf[64];
    for (const auto& row : rows) {
        if (!row.ok) ++result.failures;
        std::snprintf(buf, sizeof buf, "%.17g", row.value);
        summary << buf << ',' << (row.ok ? "ok" : "failed") << ',';
        auto num = [&](const char* key) {
            if (row.metrics.contains(key)) {
                std::snprintf(buf, sizeof buf, "%.17g", row.metrics[key].get<double>());
                summary << buf;
            }
            summary << ',';
        };
        num("final_photon");
        num("final_emitter");
        num("max_deviation");
        summary << row.error << '\n';
    }
    return result;
}

}  // namespace qfb::scenario
