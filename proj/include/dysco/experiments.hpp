#pragma once

// Virtual experiments: parameter sweeps, spectrograms, Monte Carlo phase
// averaging and baseline comparisons. Cells are independent tasks; results
// are reduced by index, so identical seeds give identical matrices no
// matter how the work is scheduled.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dysco/analysis.hpp"
#include "dysco/propagate.hpp"
#include "dysco/pulse.hpp"
#include "dysco/spin.hpp"
#include "dysco/waveform.hpp"

namespace dysco {

/// Post-hoc stretched-exponential contrast decay (tau, exponent).
struct ContrastEnvelope {
    double tau = 0.0;
    double exponent = 1.0;
};

/// Shared knobs of every virtual experiment.
struct RunParams {
    double rabi = two_pi * 8.33e6;       // rad/s
    double detuning = 0.0;               // rad/s (resonant drive by default)
    double gamma_nv = gamma_nv_default;  // rad/s/T
    int substeps = default_substeps_per_pulse;
    int shots = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;                // 0 = hardware concurrency
    std::optional<ContrastEnvelope> envelope;
};

/// Labeled 2-D grid of P0 values.
struct SweepResult {
    std::string axis1_name;
    std::string axis2_name;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> p0;  // row-major: p0[i1 * axis2.size() + i2]
    std::vector<std::pair<std::string, std::string>> meta;

    double& at(std::size_t i1, std::size_t i2) { return p0[i1 * axis2.size() + i2]; }
    double at(std::size_t i1, std::size_t i2) const { return p0[i1 * axis2.size() + i2]; }
    std::vector<double> row(std::size_t i1) const {
        return {p0.begin() + static_cast<std::ptrdiff_t>(i1 * axis2.size()),
                p0.begin() + static_cast<std::ptrdiff_t>((i1 + 1) * axis2.size())};
    }
};

/// Spectrograms are sweeps over (f_s, beta_k).
using Spectrogram = SweepResult;

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

inline double finish_p0(double raw, double t, const RunParams& params) {
    if (params.envelope)
        return apply_contrast_envelope(raw, t, params.envelope->tau, params.envelope->exponent);
    return raw;
}

inline void push_common_meta(SweepResult& out, const RunParams& params, std::size_t n_units) {
    out.meta.emplace_back("rabi_rad_s", std::to_string(params.rabi));
    out.meta.emplace_back("n_units", std::to_string(n_units));
    out.meta.emplace_back("seed", std::to_string(params.seed));
    out.meta.emplace_back("shots", std::to_string(params.shots));
    out.meta.emplace_back("substeps", std::to_string(params.substeps));
}

}  // namespace detail

/// Mean and standard error of the signal over independent shot draws.
struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

inline MonteCarloEstimate monte_carlo_p0(const PulseProgram& prog, const Waveform& waveform,
                                         int shots, std::uint64_t seed,
                                         const RunParams& params) {
    if (shots < 1) throw std::invalid_argument("monte_carlo_p0: shots must be >= 1");
    // Welford accumulation: identical samples give an exactly zero variance.
    double mean = 0.0, m2 = 0.0;
    for (int k = 0; k < shots; ++k) {
        const ShotContext ctx = draw_shot(waveform, seed, static_cast<std::uint64_t>(k));
        const SpinState fin =
            propagate(SpinState{}, prog, waveform, ctx, params.gamma_nv, params.substeps);
        const double v = signal_p0(prog, fin);
        const double delta = v - mean;
        mean += delta / (k + 1);
        m2 += delta * (v - mean);
    }
    MonteCarloEstimate est;
    est.mean = mean;
    if (shots > 1) est.stderr_mean = std::sqrt(std::max(0.0, m2 / (shots - 1)) / shots);
    return est;
}

/// P0(phi, B_RF) map with a constant-envelope synchronous drive tone.
/// Deterministic.
inline SweepResult run_p0_map(const std::vector<double>& phi_grid,
                              const std::vector<double>& b_grid, std::size_t n_units,
                              const RunParams& params) {
    if (phi_grid.empty() || b_grid.empty())
        throw std::invalid_argument("run_p0_map: empty grid");
    SweepResult out;
    out.axis1_name = "phi_rad";
    out.axis2_name = "b_rf_t";
    out.axis1 = phi_grid;
    out.axis2 = b_grid;
    out.p0.assign(phi_grid.size() * b_grid.size(), 0.0);
    detail::push_common_meta(out, params, n_units);
    detail::parallel_for(phi_grid.size(), params.threads, [&](std::size_t i) {
        const PulseProgram prog = build_dysco(n_units, phi_grid[i], params.rabi);
        for (std::size_t j = 0; j < b_grid.size(); ++j) {
            Waveform w;
            w.tones.push_back({b_grid[j], 0.0, 0.0});
            const ShotContext ctx = draw_shot(w, params.seed, 0);
            const SpinState fin =
                propagate(SpinState{}, prog, w, ctx, params.gamma_nv, params.substeps);
            out.at(i, j) = detail::finish_p0(signal_p0(prog, fin), prog.total_time, params);
        }
    });
    return out;
}

/// Per-phi response spectra S(zeta) plus the extracted sensitivity curve.
struct SensitivityScan {
    SweepResult p0_map;
    SweepResult spectra;  // axis1 = phi, axis2 = zeta (normalized to global max 1)
    SensitivityCurve curve;
};

inline SensitivityScan run_sensitivity_scan(const std::vector<double>& phi_grid,
                                            double b_max, std::size_t n_b,
                                            std::size_t n_units, const RunParams& params) {
    if (n_b < 16) throw std::invalid_argument("run_sensitivity_scan: need >= 16 ramp samples");
    std::vector<double> b_grid(n_b);
    const double db = b_max / static_cast<double>(n_b - 1);
    for (std::size_t j = 0; j < n_b; ++j) b_grid[j] = db * static_cast<double>(j);

    SensitivityScan scan;
    scan.p0_map = run_p0_map(phi_grid, b_grid, n_units, params);

    std::vector<std::vector<double>> rows(phi_grid.size());
    for (std::size_t i = 0; i < phi_grid.size(); ++i) rows[i] = scan.p0_map.row(i);
    scan.curve = sensitivity_curve(phi_grid, rows, db);

    const Spectrum first = response_spectrum(rows[0], db);
    scan.spectra.axis1_name = "phi_rad";
    scan.spectra.axis2_name = "zeta_per_t";
    scan.spectra.axis1 = phi_grid;
    scan.spectra.axis2 = first.coord;
    scan.spectra.p0.assign(phi_grid.size() * first.coord.size(), 0.0);
    detail::push_common_meta(scan.spectra, params, n_units);
    double global_max = 0.0;
    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
        const Spectrum s = response_spectrum(rows[i], db);
        for (std::size_t k = 0; k < s.magnitude.size(); ++k) {
            scan.spectra.at(i, k) = s.magnitude[k];
            global_max = std::max(global_max, s.magnitude[k]);
        }
    }
    if (global_max > 0.0)
        for (double& v : scan.spectra.p0) v /= global_max;
    return scan;
}

/// P0 versus a 0 -> 1 sensitivity ramp at one or more fixed fields. The
/// ramp starts at zero sensitivity, so the oscillation count is free of
/// wrap-around ambiguity.
inline SweepResult run_dr_ramp(std::size_t n_beta_steps, const std::vector<double>& b_values,
                               std::size_t n_units, const RunParams& params) {
    if (n_beta_steps < 2) throw std::invalid_argument("run_dr_ramp: need >= 2 beta steps");
    if (b_values.empty()) throw std::invalid_argument("run_dr_ramp: no field values");
    SweepResult out;
    out.axis1_name = "beta_k";
    out.axis2_name = "b_rf_t";
    out.axis1.resize(n_beta_steps);
    for (std::size_t k = 0; k < n_beta_steps; ++k)
        out.axis1[k] = static_cast<double>(k) / static_cast<double>(n_beta_steps - 1);
    out.axis2 = b_values;
    out.p0.assign(n_beta_steps * b_values.size(), 0.0);
    detail::push_common_meta(out, params, n_units);
    out.meta.emplace_back("dr_bound_note",
                          "theoretical bound T_DYSCO*rabi/(9*pi) is a reconstruction");
    detail::parallel_for(n_beta_steps, params.threads, [&](std::size_t k) {
        const PulseProgram prog =
            build_dysco(n_units, phase_for_sensitivity(out.axis1[k]), params.rabi);
        for (std::size_t j = 0; j < b_values.size(); ++j) {
            Waveform w;
            w.tones.push_back({b_values[j], 0.0, 0.0});
            const ShotContext ctx = draw_shot(w, params.seed, 0);
            const SpinState fin =
                propagate(SpinState{}, prog, w, ctx, params.gamma_nv, params.substeps);
            out.at(k, j) = detail::finish_p0(signal_p0(prog, fin), prog.total_time, params);
        }
    });
    return out;
}

/// P0 over (f_s, beta_k): per cell a sensitivity-modulated program is run
/// against the waveform, averaging over shots when the waveform carries
/// per-shot randomness. Spectral resolution is 1/t_N.
inline Spectrogram run_spectrogram(const std::vector<double>& fs_grid,
                                   std::size_t n_beta_steps, const Waveform& waveform,
                                   std::size_t n_units, WindowKind window,
                                   const RunParams& params) {
    if (fs_grid.empty()) throw std::invalid_argument("run_spectrogram: empty f_s grid");
    if (n_beta_steps < 1) throw std::invalid_argument("run_spectrogram: need >= 1 beta step");
    const double limit = bandwidth_limit_hz(params.rabi);
    for (const double f : fs_grid)
        if (f > limit)
            throw std::invalid_argument("run_spectrogram: f_s above bandwidth limit rabi/(9*pi)");
    Spectrogram out;
    out.axis1_name = "f_s_hz";
    out.axis2_name = "beta_k";
    out.axis1 = fs_grid;
    out.axis2.resize(n_beta_steps + 1);
    for (std::size_t k = 0; k <= n_beta_steps; ++k)
        out.axis2[k] = static_cast<double>(k) / static_cast<double>(n_beta_steps);
    out.p0.assign(fs_grid.size() * (n_beta_steps + 1), 0.0);
    detail::push_common_meta(out, params, n_units);
    out.meta.emplace_back("window", window_name(window));
    const std::size_t cells = out.p0.size();
    detail::parallel_for(cells, params.threads, [&](std::size_t cell) {
        const std::size_t i = cell / out.axis2.size();
        const std::size_t k = cell % out.axis2.size();
        const PulseProgram prog =
            build_dysco_modulated(n_units, out.axis1[i], out.axis2[k], window, params.rabi);
        const MonteCarloEstimate est = monte_carlo_p0(
            prog, waveform, params.shots, derive_stream(params.seed, cell), params);
        out.p0[cell] = detail::finish_p0(est.mean, prog.total_time, params);
    });
    return out;
}

/// Noise spectroscopy against a bath surrogate: Monte Carlo over random
/// bath realizations per cell.
inline Spectrogram run_noise_spectrum(const std::vector<double>& fs_grid,
                                      std::size_t n_beta_steps, const BathSurrogate& bath,
                                      std::size_t n_units, WindowKind window,
                                      const RunParams& params) {
    Waveform w;
    w.bath = bath;
    w.shot_phase_mode = ShotPhaseMode::random_per_shot;
    return run_spectrogram(fs_grid, n_beta_steps, w, n_units, window, params);
}

/// Bloch-vector trajectory of a single shot.
inline std::vector<TracePoint> run_trace(const PulseProgram& prog, const Waveform& waveform,
                                         const RunParams& params) {
    const ShotContext ctx = draw_shot(waveform, params.seed, 0);
    return propagate_trace(SpinState{}, prog, waveform, ctx, params.gamma_nv,
                           params.substeps);
}

enum class BaselineKind { hahn, xy8, dysco };

/// Baseline comparison under a common waveform: XY8 swept over the
/// interpulse spacing (collapses when 1/(2 tau) hits a bath line), fixed-phi
/// DYSCO swept over N at matched total times (stays flat off-resonance),
/// Hahn swept over tau.
inline SweepResult run_baseline_comparison(BaselineKind kind, const Waveform& waveform,
                                           const std::vector<double>& grid,
                                           std::size_t reps_or_n, double fixed_phi,
                                           const RunParams& params) {
    if (grid.empty()) throw std::invalid_argument("run_baseline_comparison: empty grid");
    SweepResult out;
    out.axis1_name = kind == BaselineKind::dysco ? "n_units" : "tau_s";
    out.axis2_name = "total_time_s";
    out.axis1 = grid;
    out.axis2.assign(grid.size(), 0.0);
    out.p0.assign(grid.size(), 0.0);
    detail::push_common_meta(out, params, reps_or_n);
    out.meta.emplace_back("baseline",
                          kind == BaselineKind::xy8    ? "xy8"
                          : kind == BaselineKind::hahn ? "hahn"
                                                       : "dysco");
    detail::parallel_for(grid.size(), params.threads, [&](std::size_t i) {
        PulseProgram prog;
        switch (kind) {
            case BaselineKind::xy8:
                prog = build_xy8(reps_or_n, grid[i], params.rabi);
                break;
            case BaselineKind::hahn:
                prog = build_hahn_echo(grid[i], params.rabi, true);
                break;
            case BaselineKind::dysco:
                prog = build_dysco(static_cast<std::size_t>(grid[i]), fixed_phi, params.rabi);
                break;
        }
        const MonteCarloEstimate est = monte_carlo_p0(
            prog, waveform, params.shots, derive_stream(params.seed, i), params);
        out.axis2[i] = prog.total_time;
        out.p0[i] = detail::finish_p0(est.mean, prog.total_time, params);
    });
    // table emission uses axis vectors; p0 is one row per grid point
    return out;
}

/// Column response of a spectrogram: largest |P0 - 1| over the beta_k axis.
inline std::vector<double> column_response(const Spectrogram& spec) {
    std::vector<double> resp(spec.axis1.size(), 0.0);
    for (std::size_t i = 0; i < spec.axis1.size(); ++i)
        for (std::size_t k = 0; k < spec.axis2.size(); ++k)
            resp[i] = std::max(resp[i], std::fabs(spec.at(i, k) - 1.0));
    return resp;
}

}  // namespace dysco
