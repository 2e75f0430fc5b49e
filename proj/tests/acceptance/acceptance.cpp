// Acceptance suite: one pass/fail line per criterion. Each criterion is a
// self-contained virtual experiment with pinned tolerances; run all by
// default or a subset by listing criterion numbers on the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dysco/dysco.hpp"
#include "support/oracles.hpp"

using namespace dysco;

namespace {

unsigned hw_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : hw;
}

RunParams base_params() {
    RunParams p;
    p.rabi = two_pi * 8.33e6;
    p.threads = hw_threads();
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Zero-field identity: N in {1,5,20,100}, phi in {0, pi/6, pi/4, pi/2, pi},
//    B_RF = 0  =>  |P0 - 1| < 1e-9.
Outcome criterion_1() {
    RunParams params = base_params();
    params.substeps = 1;
    Waveform empty;
    const ShotContext ctx = draw_shot(empty, 0, 0);
    double worst = 0.0;
    for (std::size_t n : {1ul, 5ul, 20ul, 100ul}) {
        for (double phi : {0.0, pi / 6, pi / 4, pi / 2, pi}) {
            const PulseProgram prog = build_dysco(n, phi, params.rabi);
            const SpinState fin =
                propagate(SpinState{}, prog, empty, ctx, params.gamma_nv, params.substeps);
            worst = std::max(worst, std::fabs(signal_p0(prog, fin) - 1.0));
        }
    }
    std::ostringstream os;
    os << "max |P0 - 1| = " << worst << " (tolerance 1e-9)";
    return {worst < 1e-9, os.str()};
}

// ---------------------------------------------------------------------------
// 2. Sensitivity law: beta(phi) at N = 40 over 19 phi points fits |sin phi|
//    with R^2 > 0.99 and max residual < 0.05 on a ramp within gamma*B <= Omega/4.
Outcome criterion_2() {
    RunParams params = base_params();
    params.substeps = 1;
    std::vector<double> phi_grid;
    for (int i = 0; i < 19; ++i) phi_grid.push_back(pi * i / 18.0);
    const double b_max = (params.rabi / 4.0) / std::fabs(params.gamma_nv);
    const SensitivityScan scan = run_sensitivity_scan(phi_grid, b_max, 512, 40, params);
    std::ostringstream os;
    os << "R^2 = " << scan.curve.r_squared << " (> 0.99), max residual = "
       << scan.curve.max_residual << " (< 0.05)";
    return {scan.curve.r_squared > 0.99 && scan.curve.max_residual < 0.05, os.str()};
}

// ---------------------------------------------------------------------------
// 3. Linear small-field regime: dominant zeta scales linearly with N
//    (R^2 > 0.999 over N = 50, 100, 200) and the response stays harmonic
//    (secondary spectral component < 10% of primary) up to gamma*B = Omega/4.
Outcome criterion_3() {
    RunParams params = base_params();
    params.substeps = 1;
    const double b_max = (params.rabi / 4.0) / std::fabs(params.gamma_nv);
    const std::vector<double> phi = {pi / 2};
    const std::vector<std::size_t> n_list = {50, 100, 200};
    std::vector<double> zetas;
    double worst_secondary = 0.0;
    for (const std::size_t n : n_list) {
        std::vector<double> ramp(1024);
        const double db = b_max / 1023.0;
        for (std::size_t j = 0; j < ramp.size(); ++j) ramp[j] = db * j;
        const SweepResult map = run_p0_map(phi, ramp, n, params);
        const Spectrum spec = response_spectrum(map.row(0), db);
        const DominantComponent dom = dominant_component(spec);
        if (!dom.significant) return {false, "no dominant component at N=" + std::to_string(n)};
        zetas.push_back(dom.coord);
        double secondary = 0.0;
        for (std::size_t k = 1; k < spec.coord.size(); ++k) {
            const double c = spec.coord[k];
            if (c > 0.1 * dom.coord && std::fabs(c - dom.coord) > 0.3 * dom.coord)
                secondary = std::max(secondary, spec.magnitude[k]);
        }
        worst_secondary = std::max(worst_secondary, secondary / dom.magnitude);
    }
    // least-squares line zeta = a*N + b
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n_list.size());
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        sx += n_list[i];
        sy += zetas[i];
        sxx += static_cast<double>(n_list[i]) * n_list[i];
        sxy += n_list[i] * zetas[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const double fit = slope * n_list[i] + intercept;
        ss_res += (zetas[i] - fit) * (zetas[i] - fit);
        ss_tot += (zetas[i] - sy / m) * (zetas[i] - sy / m);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    std::ostringstream os;
    os << "zeta(N) linear fit R^2 = " << r2 << " (> 0.999), worst secondary/primary = "
       << worst_secondary << " (< 0.10)";
    return {r2 > 0.999 && worst_secondary < 0.10, os.str()};
}

// ---------------------------------------------------------------------------
// 4. Dynamic range: reconstructed bound T_DYSCO*Omega/(9*pi) = 4.7e3 +- 0.1e3,
//    within 15% of the quoted 5e3; a beta ramp recovers oscillation counts for
//    fields spanning three decades without wrap-around ambiguity.
Outcome criterion_4() {
    const double bound = theoretical_dr_bound(two_pi * 8.33e6, 2.55e-3);
    if (std::fabs(bound - 4.7e3) > 0.1e3)
        return {false, "bound " + std::to_string(bound) + " outside 4.7e3 +- 0.1e3"};
    if (std::fabs(bound - 5e3) / 5e3 > 0.15)
        return {false, "bound deviates more than 15% from the quoted 5e3"};

    RunParams params = base_params();
    params.substeps = 1;
    // Long interrogation at small fields: the top field sits at
    // gamma*B = Omega/40, safely inside the linear-response regime, and the
    // smallest field three decades below it still produces a countable
    // crossing thanks to N large.
    const std::size_t n_units = 3927;
    const double b_top = (params.rabi / 40.0) / std::fabs(params.gamma_nv);
    const std::vector<double> fields = {b_top / 1000.0, b_top / 100.0, b_top / 10.0, b_top};
    const SweepResult ramp = run_dr_ramp(3001, fields, n_units, params);

    // linear-regime model: total rotation at full ramp is c * gamma * B,
    // crossings of 1/2 every pi of accumulated angle
    std::vector<double> counts;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::vector<double> col(ramp.axis1.size());
        for (std::size_t k = 0; k < col.size(); ++k) col[k] = ramp.at(k, j);
        counts.push_back(static_cast<double>(count_level_crossings(col, 0.5)));
    }
    // calibrate the count-per-field slope in the mid decade
    const double c_cal = counts[2] / fields[2];
    bool ok = counts.back() >= 400.0 && counts.front() >= 1.0;
    std::ostringstream os;
    os << "bound = " << bound << "; counts";
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const double predicted = c_cal * fields[j];
        os << " " << counts[j] << "/" << predicted;
        if (std::fabs(counts[j] - predicted) > std::max(2.0, 0.03 * predicted)) ok = false;
    }
    // analytic cross-check of the calibration: 16 N gamma B / (pi Omega) crossings
    const double c_model = 16.0 * static_cast<double>(n_units) *
                           std::fabs(params.gamma_nv) / (pi * params.rabi);
    os << "; c_cal/c_model = " << c_cal / c_model;
    if (std::fabs(c_cal / c_model - 1.0) > 0.05) ok = false;
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Harmonic-free sensing: a synchronous 8 kHz tone produces a spectrogram
//    response at 8 kHz with < 5% relative response at 2, 4, 16, 24, 32 kHz,
//    while the XY8 filter function on the same grid has a 3rd harmonic > 3%.
Outcome criterion_5() {
    RunParams params = base_params();
    params.rabi = two_pi * 1e6;  // desk scale: N = 250 gives ~1 kHz resolution
    params.substeps = 8;
    const std::size_t n_units = 250;

    Waveform w;
    w.tones.push_back({3.6e-8, 8e3, -0.5 * pi});  // sin-phased (lock-in quadrature)
    std::vector<double> fs_grid;
    for (int f = 2; f <= 32; f += 2) fs_grid.push_back(1e3 * f);
    const Spectrogram spec =
        run_spectrogram(fs_grid, 12, w, n_units, WindowKind::rectangular, params);
    const std::vector<double> resp = column_response(spec);
    const auto col = [&](double f_hz) {
        for (std::size_t i = 0; i < fs_grid.size(); ++i)
            if (std::fabs(fs_grid[i] - f_hz) < 1.0) return resp[i];
        return -1.0;
    };
    const double main = col(8e3);
    bool ok = main > 0.2;
    double worst_rel = 0.0;
    for (const double f : {2e3, 4e3, 16e3, 24e3, 32e3})
        worst_rel = std::max(worst_rel, col(f) / main);
    ok = ok && worst_rel < 0.05;

    const double tau = 1.0 / (2.0 * 8e3);
    const PulseProgram xy8 = build_xy8(4, tau, two_pi * 8.33e6);
    const std::vector<double> g = sensitivity_function(xy8, 16384);
    std::vector<double> omega_grid;
    for (const double f : fs_grid) omega_grid.push_back(two_pi * f);
    const FilterFunction ff =
        filter_function(g, xy8.total_time / static_cast<double>(g.size()), omega_grid);
    const double f_fund = ff.values[3];   // 8 kHz
    const double f_third = ff.values[11]; // 24 kHz
    const double third_ratio = f_third / f_fund;
    ok = ok && third_ratio > 0.03;

    std::ostringstream os;
    os << "DYSCO response(8k) = " << main << ", worst harmonic ratio = " << worst_rel
       << " (< 0.05); XY8 3rd harmonic ratio = " << third_ratio << " (> 0.03)";
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 6. Multiplexing: six tones at 2,4,5,6,7,9 kHz resolve into six local maxima
//    at the correct scan columns with a 1 kHz resolution sequence.
Outcome criterion_6() {
    RunParams params = base_params();
    params.rabi = two_pi * 1e6;
    params.substeps = 8;
    const std::size_t n_units = 250;  // t_N ~ 1.0 ms: 1 kHz spectral resolution

    const double tone_freqs[6] = {2e3, 4e3, 5e3, 6e3, 7e3, 9e3};
    const double tone_amps[6] = {3.4e-8, 2.7e-8, 2.1e-8, 3.0e-8, 2.4e-8, 1.8e-8};
    Waveform w;
    for (int i = 0; i < 6; ++i) w.tones.push_back({tone_amps[i], tone_freqs[i], -0.5 * pi});

    std::vector<double> fs_grid;
    for (double f = 1.0e3; f <= 10.5e3 + 1.0; f += 0.5e3) fs_grid.push_back(f);
    const Spectrogram spec =
        run_spectrogram(fs_grid, 12, w, n_units, WindowKind::gaussian, params);
    const std::vector<double> resp = column_response(spec);

    std::vector<double> maxima;
    for (std::size_t i = 1; i + 1 < resp.size(); ++i)
        if (resp[i] > resp[i - 1] && resp[i] > resp[i + 1] && resp[i] > 0.1)
            maxima.push_back(fs_grid[i]);
    bool ok = maxima.size() == 6;
    if (ok)
        for (int i = 0; i < 6; ++i)
            if (std::fabs(maxima[i] - tone_freqs[i]) > 1.0) ok = false;
    std::ostringstream os;
    os << maxima.size() << " local maxima at {";
    for (const double f : maxima) os << " " << f;
    os << " } Hz (expected the six tones)";
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 7. Incoherent limit: an asynchronous 100 kHz tone averaged over 200 shots
//    plateaus at P0 = 0.50 +- 0.02 on resonance with no off-resonance response
//    above threshold.
Outcome criterion_7() {
    RunParams params = base_params();
    params.substeps = 4;
    params.shots = 200;
    params.seed = 20260808;
    const std::size_t n_units = 208;  // t_N ~ 0.1 ms: 10 kHz resolution

    Waveform w;
    w.shot_phase_mode = ShotPhaseMode::random_per_shot;
    w.tones.push_back({1.2e-5, 100e3, 0.0});

    const std::vector<double> fs_grid = {40e3,  50e3,  60e3,  80e3,  100e3,
                                         120e3, 150e3, 200e3, 250e3, 300e3};
    const Spectrogram spec =
        run_spectrogram(fs_grid, 40, w, n_units, WindowKind::rectangular, params);

    // plateau: the incoherent mean over the upper half of the beta_k axis,
    // where the per-row phase-average wobble cancels out
    std::size_t on_col = 0;
    for (std::size_t i = 0; i < fs_grid.size(); ++i)
        if (std::fabs(fs_grid[i] - 100e3) < 1.0) on_col = i;
    double plateau = 0.0;
    std::size_t n_avg = 0;
    for (std::size_t k = 0; k < spec.axis2.size(); ++k) {
        if (spec.axis2[k] < 0.5) continue;
        plateau += spec.at(on_col, k);
        ++n_avg;
    }
    plateau /= static_cast<double>(n_avg);

    const std::vector<double> resp = column_response(spec);
    std::vector<double> off;
    for (std::size_t i = 0; i < fs_grid.size(); ++i)
        if (std::fabs(fs_grid[i] - 100e3) > 15e3) off.push_back(resp[i]);
    std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
    // harmonic-absence threshold: 5% of the primary response (as in the
    // harmonic-free criterion), floored by the median-based detection rule
    const double threshold = std::max(5.0 * off[off.size() / 2], 0.05 * resp[on_col]);
    double worst_off = 0.0;
    for (const double f : {50e3, 200e3, 300e3})
        for (std::size_t i = 0; i < fs_grid.size(); ++i)
            if (std::fabs(fs_grid[i] - f) < 1.0) worst_off = std::max(worst_off, resp[i]);

    const bool ok = std::fabs(plateau - 0.5) <= 0.02 && resp[on_col] > 10.0 * threshold &&
                    worst_off < threshold;
    std::ostringstream os;
    os << "plateau = " << plateau << " (0.50 +- 0.02); off-resonance max = " << worst_off
       << " vs threshold " << threshold;
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 8. Bath spectroscopy: a surrogate bath at 432.6 kHz yields one response band
//    at 430 +- 10 kHz over a 10-1000 kHz scan with no artefacts at the
//    sub/harmonic columns; an added 100 kHz noise tone adds only a 100 kHz
//    line; a +-15 kHz coupled pair is resolved at 5 kHz resolution.
Outcome criterion_8() {
    RunParams params = base_params();
    params.substeps = 4;
    params.shots = 64;
    params.seed = 40404;

    BathSurrogate bath;
    bath.larmor_center_hz = 432.6e3;  // gamma(13C) * 40.4 mT
    bath.larmor_spread_hz = 10e3;
    bath.n_oscillators = 24;
    bath.rms_amplitude = 0.6e-6;

    std::ostringstream os;
    bool ok = true;

    // (a) wide scan
    {
        const std::size_t n_units = 208;  // 10 kHz resolution
        std::vector<double> fs_grid;
        for (double f = 10e3; f <= 1000e3; f += 10e3) fs_grid.push_back(f);
        const Spectrogram spec =
            run_noise_spectrum(fs_grid, 2, bath, n_units, WindowKind::rectangular, params);
        const std::vector<double> resp = column_response(spec);
        std::size_t peak = 0;
        for (std::size_t i = 1; i < resp.size(); ++i)
            if (resp[i] > resp[peak]) peak = i;
        const double f_peak = fs_grid[peak];
        ok = ok && std::fabs(f_peak - 430e3) <= 10e3;

        std::vector<double> off;
        for (std::size_t i = 0; i < fs_grid.size(); ++i)
            if (std::fabs(fs_grid[i] - 432.6e3) > 50e3) off.push_back(resp[i]);
        std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
        const double threshold = std::max(5.0 * off[off.size() / 2], 0.05 * resp[peak]);
        // single band: everything above threshold sits around the Larmor line
        for (std::size_t i = 0; i < fs_grid.size(); ++i)
            if (resp[i] >= threshold && std::fabs(fs_grid[i] - 430e3) > 40e3) ok = false;
        double artefact = 0.0;
        for (const double f : {100e3, 210e3, 220e3, 860e3})
            for (std::size_t i = 0; i < fs_grid.size(); ++i)
                if (std::fabs(fs_grid[i] - f) < 1.0) artefact = std::max(artefact, resp[i]);
        ok = ok && resp[peak] > 10.0 * threshold && artefact < threshold;
        os << "band at " << f_peak << " Hz, artefact max " << artefact << " vs threshold "
           << threshold;

        // (b) inject an asynchronous 100 kHz noise tone: bath oscillators are
        // drawn before tone phases, so each shot's bath realization is
        // bit-identical to the run above and the Larmor column comparison is
        // free of Monte Carlo scatter
        Waveform noisy;
        noisy.bath = bath;
        noisy.shot_phase_mode = ShotPhaseMode::random_per_shot;
        noisy.tones.push_back({0.8e-6, 100e3, 0.0});
        const Spectrogram spec_b =
            run_spectrogram(fs_grid, 2, noisy, n_units, WindowKind::rectangular, params);
        const std::vector<double> resp_b = column_response(spec_b);
        std::size_t col100 = 0, col430 = 0;
        for (std::size_t i = 0; i < fs_grid.size(); ++i) {
            if (std::fabs(fs_grid[i] - 100e3) < 1.0) col100 = i;
            if (std::fabs(fs_grid[i] - 430e3) < 1.0) col430 = i;
        }
        const double larmor_shift =
            std::fabs(resp_b[col430] - resp[col430]) / std::max(resp[col430], 1e-12);
        ok = ok && resp_b[col100] > threshold && larmor_shift < 0.15;
        double new_artefact = 0.0;
        for (const double f : {200e3, 300e3, 50e3})
            for (std::size_t i = 0; i < fs_grid.size(); ++i)
                if (std::fabs(fs_grid[i] - f) < 1.0)
                    new_artefact = std::max(new_artefact, resp_b[i]);
        ok = ok && new_artefact < threshold;
        os << "; +100kHz line = " << resp_b[col100] << ", Larmor shift = " << larmor_shift;
    }

    // (c) resolved coupled pair at 5 kHz resolution; the gaussian window
    // suppresses the scan sidelobes that would fake extra maxima
    {
        BathSurrogate paired = bath;
        paired.rms_amplitude = 0.18e-6;
        paired.larmor_spread_hz = 4e3;
        paired.coupled_spins.push_back({30e3, 0.25e-6});
        const std::size_t n_units = 416;  // t_N ~ 0.2 ms: 5 kHz resolution
        std::vector<double> fs_grid;
        for (double f = 380e3; f <= 500e3; f += 5e3) fs_grid.push_back(f);
        const Spectrogram spec =
            run_noise_spectrum(fs_grid, 2, paired, n_units, WindowKind::gaussian, params);
        const std::vector<double> resp = column_response(spec);
        std::vector<std::pair<double, double>> maxima;  // (response, f_s)
        for (std::size_t i = 1; i + 1 < resp.size(); ++i)
            if (resp[i] > resp[i - 1] && resp[i] > resp[i + 1] && resp[i] > 0.1)
                maxima.emplace_back(resp[i], fs_grid[i]);
        std::sort(maxima.rbegin(), maxima.rend());
        bool pair_ok = maxima.size() >= 2;
        if (pair_ok) {
            const double lo = std::min(maxima[0].second, maxima[1].second);
            const double hi = std::max(maxima[0].second, maxima[1].second);
            pair_ok = std::fabs(lo - 417.6e3) <= 7.5e3 && std::fabs(hi - 447.6e3) <= 7.5e3;
        }
        ok = ok && pair_ok;
        os << "; pair maxima at {";
        for (const auto& [r, f] : maxima) os << " " << f;
        os << " } Hz";
    }
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 9. Oracle equivalence: 1000 random constant-field rotations agree with a
//    fine-step integrator to fidelity > 1 - 1e-10; a full DYSCO run is
//    substep-converged to |dP0| < 1e-6 between defaults and 8x substeps.
Outcome criterion_9() {
    Rng rng(314159);
    double worst_infidelity = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double mag = two_pi * (1e6 + 9e6 * rng.uniform());
        EffectiveField f{mag * (2.0 * rng.uniform() - 1.0), mag * (2.0 * rng.uniform() - 1.0),
                         mag * (2.0 * rng.uniform() - 1.0)};
        const double duration = (0.05 + 1.5 * rng.uniform()) * two_pi / f.magnitude();
        const int steps =
            std::max(2000, static_cast<int>(f.magnitude() * duration / two_pi * 1.0e4));
        const SpinState a = rotation(f, duration).apply(SpinState{});
        const SpinState b = oracle::rk4_constant(f, duration, steps, SpinState{});
        worst_infidelity =
            std::max(worst_infidelity, 1.0 - oracle::fidelity(a, b.normalized()));
    }

    RunParams params = base_params();
    params.rabi = two_pi * 1e6;
    const PulseProgram prog = build_dysco_modulated(100, 8e3, 0.8, WindowKind::gaussian,
                                                    params.rabi);
    Waveform w;
    w.tones.push_back({3e-8, 8e3, -0.5 * pi});
    const ShotContext ctx = draw_shot(w, 0, 0);
    const double coarse = signal_p0(
        prog, propagate(SpinState{}, prog, w, ctx, params.gamma_nv,
                        default_substeps_per_pulse));
    const double fine = signal_p0(
        prog, propagate(SpinState{}, prog, w, ctx, params.gamma_nv,
                        8 * default_substeps_per_pulse));
    const double dp0 = std::fabs(coarse - fine);
    std::ostringstream os;
    os << "worst rotation infidelity = " << worst_infidelity
       << " (< 1e-10); substep convergence |dP0| = " << dp0 << " (< 1e-6)";
    return {worst_infidelity < 1e-10 && dp0 < 1e-6, os.str()};
}

// ---------------------------------------------------------------------------
// 10. Determinism: identical config and seed give byte-identical tables,
//     independent of thread count, including the Monte Carlo path.
Outcome criterion_10() {
    RunParams params = base_params();
    params.substeps = 2;
    params.shots = 50;
    params.seed = 777;

    Waveform w;
    w.shot_phase_mode = ShotPhaseMode::random_per_shot;
    w.tones.push_back({1e-5, 100e3, 0.0});
    std::vector<double> fs_grid = {80e3, 100e3, 120e3};

    params.threads = 1;
    const std::string serial = table_to_string(make_table(
        run_spectrogram(fs_grid, 4, w, 60, WindowKind::rectangular, params)));
    params.threads = hw_threads();
    const std::string threaded = table_to_string(make_table(
        run_spectrogram(fs_grid, 4, w, 60, WindowKind::rectangular, params)));
    const std::string again = table_to_string(make_table(
        run_spectrogram(fs_grid, 4, w, 60, WindowKind::rectangular, params)));

    const std::vector<double> phi = {0.2, 1.3};
    std::vector<double> b;
    for (int j = 0; j < 24; ++j) b.push_back(1e-6 * j / 23.0);
    params.substeps = 1;
    const std::string map1 = table_to_string(make_table(run_p0_map(phi, b, 8, params)));
    const std::string map2 = table_to_string(make_table(run_p0_map(phi, b, 8, params)));

    const bool ok = serial == threaded && threaded == again && map1 == map2;
    return {ok, ok ? "spectrogram and map tables byte-identical across reruns and thread counts"
                   : "tables differ between reruns"};
}

using CriterionFn = std::function<Outcome()>;

struct Criterion {
    int number;
    const char* title;
    CriterionFn fn;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "zero-field identity", criterion_1},
        {2, "sensitivity law beta(phi) ~ |sin phi|", criterion_2},
        {3, "linear small-field regime", criterion_3},
        {4, "dynamic range", criterion_4},
        {5, "harmonic-free sensing", criterion_5},
        {6, "six-tone multiplexing", criterion_6},
        {7, "incoherent limit", criterion_7},
        {8, "bath noise spectroscopy", criterion_8},
        {9, "oracle equivalence", criterion_9},
        {10, "determinism", criterion_10},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.number) == selected.end())
            continue;
        const Outcome out = c.fn();
        std::printf("%s  criterion %2d: %s — %s\n", out.pass ? "PASS" : "FAIL", c.number,
                    c.title, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
