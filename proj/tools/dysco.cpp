// Command-line front end: one binary, one subcommand per virtual experiment.
// Scenario parameters come from a --config file; a few common keys can be
// overridden from the command line. Every emitted table carries the config
// hash and seed needed to reproduce it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dysco/dysco.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<int> shots;
    std::optional<int> substeps;
    std::optional<std::size_t> n_units;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
    auto* opt = cmd->add_option("--config", flags.config_path, "scenario config file");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_path, "output table path (overrides config)");
    cmd->add_option("--seed", flags.seed, "RNG seed (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker threads, 0 = hardware");
    cmd->add_option("--shots", flags.shots, "Monte Carlo shots per cell");
    cmd->add_option("--substeps", flags.substeps, "substeps per pulse");
    cmd->add_option("--n-units", flags.n_units, "number of 4-pi-pulse units N");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dysco::ScenarioConfig load_scenario(const CommonFlags& flags,
                                    dysco::ExperimentKind expected) {
    dysco::ConfigResult res = dysco::parse_scenario(slurp(flags.config_path));
    if (!res.ok()) {
        for (const std::string& e : res.errors) std::cerr << "config error: " << e << "\n";
        throw std::runtime_error("invalid configuration (" +
                                 std::to_string(res.errors.size()) + " error(s))");
    }
    dysco::ScenarioConfig cfg = *res.config;
    cfg.experiment = expected;
    if (flags.seed) cfg.params.seed = *flags.seed;
    if (flags.threads) cfg.params.threads = *flags.threads;
    if (flags.shots) cfg.params.shots = *flags.shots;
    if (flags.substeps) cfg.params.substeps = *flags.substeps;
    if (flags.n_units) cfg.n_units = *flags.n_units;
    if (!flags.out_path.empty()) cfg.out_path = flags.out_path;
    if (cfg.out_path.empty()) throw std::runtime_error("no output path (--out or 'out =' key)");
    return cfg;
}

void stamp_provenance(dysco::ResultTable& table, const dysco::ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> head;
    head.emplace_back("tool", dysco::tool_version);
    head.emplace_back("config_hash", dysco::config_hash(cfg));
    head.emplace_back("seed", std::to_string(cfg.params.seed));
    table.meta.insert(table.meta.begin(), head.begin(), head.end());
}

void write_out(dysco::ResultTable table, const dysco::ScenarioConfig& cfg) {
    stamp_provenance(table, cfg);
    dysco::write_table_file(table, cfg.out_path);
    std::cout << "wrote " << cfg.out_path << " (" << table.rows.size() << " rows)\n";
}

std::vector<double> default_phi_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 19; ++i) grid.push_back(dysco::pi * i / 18.0);
    return grid;
}

int run_map(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::map);
    if (cfg.phi_grid.empty()) cfg.phi_grid = default_phi_grid();
    if (cfg.b_grid.empty()) throw std::runtime_error("map: missing field block (b_max_t)");
    write_out(dysco::make_table(dysco::run_p0_map(cfg.phi_grid, cfg.b_grid, cfg.n_units,
                                                  cfg.params)),
              cfg);
    return 0;
}

int run_sensitivity(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::sensitivity);
    if (cfg.phi_grid.empty()) cfg.phi_grid = default_phi_grid();
    if (cfg.b_grid.empty()) throw std::runtime_error("sensitivity: missing field block");
    const dysco::SensitivityScan scan = dysco::run_sensitivity_scan(
        cfg.phi_grid, cfg.b_grid.back(), cfg.b_grid.size(), cfg.n_units, cfg.params);

    dysco::ResultTable beta;
    beta.meta = scan.spectra.meta;
    beta.meta.emplace_back("fit", "beta(phi) vs |sin(phi)|");
    beta.meta.emplace_back("r_squared", std::to_string(scan.curve.r_squared));
    beta.meta.emplace_back("max_residual", std::to_string(scan.curve.max_residual));
    beta.columns = {"phi_rad", "beta", "residual"};
    for (std::size_t i = 0; i < scan.curve.phi.size(); ++i)
        beta.rows.push_back({scan.curve.phi[i], scan.curve.beta[i], scan.curve.residual[i]});
    write_out(std::move(beta), cfg);

    dysco::ResultTable spectra = dysco::make_table(scan.spectra);
    stamp_provenance(spectra, cfg);
    const std::string spectra_path = cfg.out_path + ".szeta";
    dysco::write_table_file(spectra, spectra_path);
    std::cout << "wrote " << spectra_path << " (" << spectra.rows.size() << " rows)\n";
    std::cout << "beta(phi) fit: R^2 = " << scan.curve.r_squared
              << ", max residual = " << scan.curve.max_residual << "\n";
    return 0;
}

int run_dr_ramp_cmd(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::dr_ramp);
    if (cfg.b_values.empty()) throw std::runtime_error("dr-ramp: missing field values");
    dysco::SweepResult ramp =
        dysco::run_dr_ramp(cfg.beta_steps + 1, cfg.b_values, cfg.n_units, cfg.params);
    const double t_dysco = 2.55e-3;
    ramp.meta.emplace_back("theoretical_dr_bound",
                           std::to_string(dysco::theoretical_dr_bound(cfg.params.rabi, t_dysco)));
    ramp.meta.emplace_back("t_dysco_s", std::to_string(t_dysco));
    write_out(dysco::make_table(ramp), cfg);
    return 0;
}

int run_spectrogram_cmd(const CommonFlags& flags, bool noise) {
    auto cfg = load_scenario(flags, noise ? dysco::ExperimentKind::noise_spectrum
                                          : dysco::ExperimentKind::spectrogram);
    if (cfg.fs_grid.empty()) throw std::runtime_error("spectrogram: missing f_s grid");
    dysco::Spectrogram spec;
    if (noise) {
        if (!cfg.waveform.bath) throw std::runtime_error("noise-spectrum: missing bath block");
        dysco::Waveform w = cfg.waveform;
        w.shot_phase_mode = dysco::ShotPhaseMode::random_per_shot;
        spec = dysco::run_spectrogram(cfg.fs_grid, cfg.beta_steps, w, cfg.n_units, cfg.window,
                                      cfg.params);
    } else {
        spec = dysco::run_spectrogram(cfg.fs_grid, cfg.beta_steps, cfg.waveform, cfg.n_units,
                                      cfg.window, cfg.params);
    }
    write_out(dysco::make_table(spec), cfg);
    return 0;
}

int run_filter_function(const CommonFlags& flags, const std::string& sequence_flag,
                        double tau_flag, std::size_t reps_flag, double fs_flag) {
    dysco::ScenarioConfig cfg;
    if (!flags.config_path.empty()) cfg = load_scenario(flags, dysco::ExperimentKind::filter_function);
    if (!sequence_flag.empty()) cfg.ff_sequence = sequence_flag;
    if (tau_flag > 0.0) cfg.ff_tau = tau_flag;
    if (reps_flag > 0) cfg.xy8_reps = reps_flag;
    if (fs_flag > 0.0) cfg.fs_grid = {fs_flag};
    if (flags.n_units) cfg.n_units = *flags.n_units;
    if (!flags.out_path.empty()) cfg.out_path = flags.out_path;
    if (cfg.out_path.empty()) throw std::runtime_error("no output path (--out)");

    dysco::PulseProgram prog;
    if (cfg.ff_sequence == "xy8") {
        if (!(cfg.ff_tau > 0.0)) throw std::runtime_error("filter-function: xy8 needs --tau-s");
        prog = dysco::build_xy8(cfg.xy8_reps, cfg.ff_tau, cfg.params.rabi);
    } else if (cfg.ff_sequence == "hahn") {
        if (!(cfg.ff_tau > 0.0)) throw std::runtime_error("filter-function: hahn needs --tau-s");
        prog = dysco::build_hahn_echo(cfg.ff_tau, cfg.params.rabi, true);
    } else {
        const double fs = cfg.fs_grid.empty() ? 0.0 : cfg.fs_grid.front();
        prog = dysco::build_dysco_modulated(cfg.n_units, fs, 1.0, cfg.window, cfg.params.rabi);
    }
    const std::vector<double> g = dysco::sensitivity_function(prog, cfg.ff_samples);
    double omega_max = cfg.ff_omega_max;
    if (!(omega_max > 0.0))
        omega_max = dysco::two_pi * 8.0 / (prog.total_time / 4.0);  // a few passbands wide
    std::vector<double> omega(cfg.ff_omega_points);
    for (std::size_t i = 0; i < omega.size(); ++i)
        omega[i] = omega_max * static_cast<double>(i + 1) / static_cast<double>(omega.size());
    const dysco::FilterFunction ff =
        dysco::filter_function(g, prog.total_time / static_cast<double>(g.size()), omega);
    dysco::ResultTable table = dysco::make_table(ff);
    table.meta.emplace_back("sequence", cfg.ff_sequence);
    write_out(std::move(table), cfg);
    return 0;
}

int run_trace_cmd(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::trace);
    dysco::PulseProgram prog;
    if (!cfg.fs_grid.empty())
        prog = dysco::build_dysco_modulated(cfg.n_units, cfg.fs_grid.front(), 1.0, cfg.window,
                                            cfg.params.rabi);
    else
        prog = dysco::build_dysco(cfg.n_units, cfg.phi, cfg.params.rabi);
    write_out(dysco::make_table(dysco::run_trace(prog, cfg.waveform, cfg.params)), cfg);
    return 0;
}

int run_baseline_cmd(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::baseline);
    if (cfg.tau_grid.empty()) throw std::runtime_error("baseline: missing baseline block");
    dysco::BaselineKind kind = dysco::BaselineKind::xy8;
    if (cfg.baseline == "hahn") kind = dysco::BaselineKind::hahn;
    if (cfg.baseline == "dysco") kind = dysco::BaselineKind::dysco;
    write_out(dysco::make_table(dysco::run_baseline_comparison(
                  kind, cfg.waveform, cfg.tau_grid, cfg.xy8_reps, cfg.phi, cfg.params)),
              cfg);
    return 0;
}

int run_export_program(const CommonFlags& flags) {
    auto cfg = load_scenario(flags, dysco::ExperimentKind::export_program);
    dysco::PulseProgram prog;
    if (!cfg.fs_grid.empty())
        prog = dysco::build_dysco_modulated(cfg.n_units, cfg.fs_grid.front(), 1.0, cfg.window,
                                            cfg.params.rabi);
    else
        prog = dysco::build_dysco(cfg.n_units, cfg.phi, cfg.params.rabi);
    const std::vector<std::string> errors = dysco::validate(prog);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << "program error: " << e << "\n";
        return 2;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    dysco::export_program(prog, out);
    std::cout << "wrote " << cfg.out_path << " (" << prog.pulses.size() << " pulses)\n";
    return 0;
}

// Headless invariant checks, usable as a smoke test on any install.
int run_selftest() {
    using namespace dysco;
    int failures = 0;
    auto check = [&](bool ok, const char* name) {
        std::printf("%s  %s\n", ok ? "ok  " : "FAIL", name);
        if (!ok) ++failures;
    };

    {
        bool ok = true;
        for (std::size_t n : {1ul, 5ul, 20ul}) {
            for (double phi : {0.0, pi / 6, pi / 2, pi}) {
                const PulseProgram prog = build_dysco(n, phi, two_pi * 8.33e6);
                Waveform w;
                const SpinState fin = propagate(SpinState{}, prog, w, draw_shot(w, 0, 0),
                                                gamma_nv_default, 1);
                ok = ok && std::fabs(signal_p0(prog, fin) - 1.0) < 1e-9;
            }
        }
        check(ok, "zero-field identity");
    }
    {
        const PulseProgram prog = build_dysco(100, pi / 3, two_pi * 8.33e6);
        Waveform w;
        w.tones.push_back({1e-6, 0.0, 0.0});
        const SpinState fin =
            propagate(SpinState{}, prog, w, draw_shot(w, 0, 0), gamma_nv_default, 1);
        check(std::fabs(fin.norm_squared() - 1.0) < 1e-12, "norm preservation");
    }
    {
        const PulseProgram a = build_dysco_modulated(8, 0.0, 0.7, WindowKind::rectangular,
                                                     two_pi * 8.33e6);
        const PulseProgram b = build_dysco(8, 0.0, two_pi * 8.33e6);
        bool ok = a.pulses.size() == b.pulses.size();
        for (std::size_t i = 0; ok && i < a.pulses.size(); ++i)
            ok = a.pulses[i].phase == b.pulses[i].phase &&
                 a.pulses[i].duration == b.pulses[i].duration;
        check(ok, "modulated f_s=0 degenerates to base sequence");
    }
    {
        Waveform w;
        w.shot_phase_mode = ShotPhaseMode::random_per_shot;
        w.tones.push_back({1e-6, 1e5, 0.0});
        const ShotContext a = draw_shot(w, 42, 7);
        const ShotContext b = draw_shot(w, 42, 7);
        check(a.tone_phases == b.tone_phases, "shot determinism");
    }
    {
        std::vector<std::complex<double>> x(64);
        Rng rng(99);
        double power_t = 0.0;
        for (auto& v : x) {
            v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
            power_t += std::norm(v);
        }
        auto y = x;
        fft_inplace(y);
        double power_f = 0.0;
        for (const auto& v : y) power_f += std::norm(v);
        check(std::fabs(power_f / 64.0 - power_t) < 1e-9 * power_t, "fft parseval");
    }
    {
        const PulseProgram prog = build_dysco(3, 0.37, two_pi * 8.33e6);
        check(validate(prog).empty(), "builder output validates");
        PulseProgram broken = prog;
        broken.pulses.erase(broken.pulses.begin() + 12);  // drop the middle pi_y
        check(!validate(broken).empty(), "mirror violation detected");
    }
    {
        const char* text =
            "experiment = map\nseed = 3\nspin {\n rabi_rad_s = 5.2e7\n}\n"
            "sequence {\n n_units = 4\n phi_rad = 0.7\n}\n"
            "field {\n b_max_t = 1e-6\n b_points = 8\n}\n";
        const ConfigResult first = parse_scenario(text);
        bool ok = first.ok();
        if (ok) {
            const ConfigResult round = parse_scenario(emit_config(*first.config));
            ok = round.ok() && config_hash(*round.config) == config_hash(*first.config);
        }
        check(ok, "config parse/emit round-trip");
    }
    std::printf(failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DYSCO spin-sensing simulator"};
    app.require_subcommand(1);

    CommonFlags map_f, sens_f, dr_f, spec_f, noise_f, ff_f, trace_f, base_f, exp_f;
    std::string ff_sequence;
    double ff_tau = 0.0, ff_fs = 0.0;
    std::size_t ff_reps = 0;

    add_common(app.add_subcommand("map", "P0(phi, B_RF) population map"), map_f);
    add_common(app.add_subcommand("sensitivity", "beta(phi) scan with S(zeta) map"), sens_f);
    add_common(app.add_subcommand("dr-ramp", "sensitivity ramp for dynamic-range sensing"), dr_f);
    add_common(app.add_subcommand("spectrogram", "frequency-domain sensing of tones"), spec_f);
    add_common(app.add_subcommand("noise-spectrum", "bath-surrogate noise spectroscopy"), noise_f);
    CLI::App* ff_cmd = app.add_subcommand("filter-function", "F(omega) of a sequence");
    add_common(ff_cmd, ff_f, false);
    ff_cmd->add_option("--sequence", ff_sequence, "dysco|xy8|hahn");
    ff_cmd->add_option("--tau-s", ff_tau, "interpulse spacing / echo time");
    ff_cmd->add_option("--reps", ff_reps, "XY8 repetitions M");
    ff_cmd->add_option("--f-s-hz", ff_fs, "DYSCO modulation frequency");
    add_common(app.add_subcommand("trace", "Bloch-vector trajectory"), trace_f);
    add_common(app.add_subcommand("baseline", "Hahn/XY8/DYSCO baseline comparison"), base_f);
    add_common(app.add_subcommand("export-program", "emit pulse records"), exp_f);
    app.add_subcommand("selftest", "run headless invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("map")) return run_map(map_f);
        if (app.got_subcommand("sensitivity")) return run_sensitivity(sens_f);
        if (app.got_subcommand("dr-ramp")) return run_dr_ramp_cmd(dr_f);
        if (app.got_subcommand("spectrogram")) return run_spectrogram_cmd(spec_f, false);
        if (app.got_subcommand("noise-spectrum")) return run_spectrogram_cmd(noise_f, true);
        if (app.got_subcommand("filter-function"))
            return run_filter_function(ff_f, ff_sequence, ff_tau, ff_reps, ff_fs);
        if (app.got_subcommand("trace")) return run_trace_cmd(trace_f);
        if (app.got_subcommand("baseline")) return run_baseline_cmd(base_f);
        if (app.got_subcommand("export-program")) return run_export_program(exp_f);
        if (app.got_subcommand("selftest")) return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
