#pragma once

// Pulse-sequence builders: DYSCO units (fixed-phase and sensitivity-modulated),
// Hahn echo and XY8 baselines. Programs are immutable ordered pulse lists.
//
// Phase-label convention (fixed project-wide): x -> 0, xbar -> pi, y -> pi/2,
// "x+phi" -> +phi, "xbar-phi" -> pi-phi. A pulse of phase theta drives about
// the equatorial axis (cos theta, -sin theta, 0).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dysco/constants.hpp"

namespace dysco {

/// One constant-drive segment. Free evolution is a segment with rabi = 0.
struct Pulse {
    double duration = 0.0;   // s
    double rabi = 0.0;       // rad/s
    double phase = 0.0;      // rad
    double detuning = 0.0;   // rad/s
    std::string label;
};

enum class WindowKind { rectangular, gaussian };

inline const char* window_name(WindowKind w) {
    return w == WindowKind::gaussian ? "gaussian" : "rectangular";
}

/// Per-unit target sensitivities beta(t_n) and the window that shaped them.
struct SensitivityProfile {
    std::vector<double> betas;    // one per 4-pi-pulse unit, in [-beta_k, beta_k]
    std::vector<double> centers;  // t_n = (1 + 2n) * 2*pi / rabi
    WindowKind window = WindowKind::rectangular;
    double beta_k = 0.0;          // amplitude factor in [0, 1]
    double f_s = 0.0;             // modulation frequency, Hz
};

enum class SequenceKind { dysco, dysco_modulated, hahn_echo, xy8, custom };

inline const char* sequence_name(SequenceKind k) {
    switch (k) {
        case SequenceKind::dysco: return "dysco";
        case SequenceKind::dysco_modulated: return "dysco-modulated";
        case SequenceKind::hahn_echo: return "hahn-echo";
        case SequenceKind::xy8: return "xy8";
        default: return "custom";
    }
}

struct PulseProgram {
    std::vector<Pulse> pulses;
    SequenceKind kind = SequenceKind::custom;
    std::size_t n_units = 0;      // N for DYSCO, repetitions M for XY8
    double rabi = 0.0;            // drive Rabi rate the program was built for
    double phi = 0.0;             // fixed unit phase (base DYSCO only)
    double total_time = 0.0;      // s
    // True when the sequence maps |0> to |-> at zero external field (odd
    // number of population-inverting pi pulses). Readout of the sensing
    // signal is referenced to that endpoint, mirroring the normalized
    // experimental readout: an undisturbed run reads 1.
    bool readout_inverted = false;
    std::optional<SensitivityProfile> sensitivity_schedule;

    /// Pulse start times, accumulated in extended precision and rounded once.
    std::vector<double> start_times() const {
        std::vector<double> out;
        out.reserve(pulses.size());
        long double t = 0.0L;
        for (const Pulse& p : pulses) {
            out.push_back(static_cast<double>(t));
            t += static_cast<long double>(p.duration);
        }
        return out;
    }
};

namespace detail {

// First-half unit [pi_xbar-phi, pi_x-phi, pi_x+phi, pi_xbar+phi].
inline void append_unit_forward(std::vector<Pulse>& out, double phi, double t_pi,
                                double rabi) {
    out.push_back({t_pi, rabi, pi - phi, 0.0, "pi_xbar_minus_phi"});
    out.push_back({t_pi, rabi, -phi, 0.0, "pi_x_minus_phi"});
    out.push_back({t_pi, rabi, phi, 0.0, "pi_x_plus_phi"});
    out.push_back({t_pi, rabi, pi + phi, 0.0, "pi_xbar_plus_phi"});
}

// Second-half unit [pi_x-phi, pi_xbar-phi, pi_xbar+phi, pi_x+phi]: the
// forward unit phase-negated and reordered. Under the middle pi_y frame
// flip this realizes the same instantaneous sensitivity sign as the first
// half, so the per-unit response accumulates coherently across the echo
// (mirror relation: phase(k) + phase(8N-k) = pi).
inline void append_unit_mirrored(std::vector<Pulse>& out, double phi, double t_pi,
                                 double rabi) {
    out.push_back({t_pi, rabi, -phi, 0.0, "pi_x_minus_phi"});
    out.push_back({t_pi, rabi, pi - phi, 0.0, "pi_xbar_minus_phi"});
    out.push_back({t_pi, rabi, pi + phi, 0.0, "pi_xbar_plus_phi"});
    out.push_back({t_pi, rabi, phi, 0.0, "pi_x_plus_phi"});
}

}  // namespace detail

/// Sensitivity-to-phase map phi = arcsin(beta), the odd inverse of the
/// beta ~ sin(phi) response law, normalized so beta = 1 maps to pi/2.
inline double phase_for_sensitivity(double beta) {
    if (!(beta >= -1.0 && beta <= 1.0))
        throw std::invalid_argument("phase_for_sensitivity: beta outside [-1, 1]");
    return std::asin(beta);
}

/// N forward units, one middle pi_y, N mirrored units: 8N+1 pi pulses,
/// total time (4N + 1/2) * 2*pi / rabi.
inline PulseProgram build_dysco(std::size_t n, double phi, double rabi) {
    if (n < 1) throw std::invalid_argument("build_dysco: N must be >= 1");
    if (rabi <= 0.0) throw std::invalid_argument("build_dysco: rabi must be > 0");
    const double t_pi = pi / rabi;
    PulseProgram prog;
    prog.kind = SequenceKind::dysco;
    prog.n_units = n;
    prog.rabi = rabi;
    prog.phi = phi;
    prog.readout_inverted = true;
    prog.pulses.reserve(8 * n + 1);
    for (std::size_t u = 0; u < n; ++u)
        detail::append_unit_forward(prog.pulses, phi, t_pi, rabi);
    prog.pulses.push_back({t_pi, rabi, 0.5 * pi, 0.0, "pi_y"});
    for (std::size_t u = 0; u < n; ++u)
        detail::append_unit_mirrored(prog.pulses, phi, t_pi, rabi);
    prog.total_time = (4.0 * static_cast<double>(n) + 0.5) * (two_pi / rabi);
    return prog;
}

/// Largest modulation frequency the scheme supports: 1/t_N at N = 1.
inline double bandwidth_limit_hz(double rabi) { return rabi / (9.0 * pi); }

/// Envelope shaping the per-unit sensitivity targets. The gaussian case is
/// exp(-(t - t_total/2)^2 / (2 (t_total/2)^2)): unity at mid-sequence,
/// symmetric, suppressing the sinc wiggles of the rectangular window.
inline double modulation_window(WindowKind window, double t, double t_total) {
    if (window == WindowKind::rectangular) return 1.0;
    const double half = 0.5 * t_total;
    const double d = t - half;
    return std::exp(-d * d / (2.0 * half * half));
}

/// DYSCO with per-unit phases phi_n = arcsin(window(t_n) * beta_k *
/// sin(2 pi f_s t_n)), t_n the unit centers measured from sequence start.
/// Unit ordering mirrors build_dysco around the single middle pi_y.
inline PulseProgram build_dysco_modulated(std::size_t n, double f_s, double beta_k,
                                          WindowKind window, double rabi) {
    if (n < 1) throw std::invalid_argument("build_dysco_modulated: N must be >= 1");
    if (rabi <= 0.0) throw std::invalid_argument("build_dysco_modulated: rabi must be > 0");
    if (!(beta_k >= 0.0 && beta_k <= 1.0))
        throw std::invalid_argument("build_dysco_modulated: beta_k outside [0, 1]");
    if (f_s < 0.0) throw std::invalid_argument("build_dysco_modulated: f_s must be >= 0");
    if (f_s > bandwidth_limit_hz(rabi))
        throw std::invalid_argument("build_dysco_modulated: f_s above bandwidth limit rabi/(9*pi)");

    const double t_pi = pi / rabi;
    const double t_total = (4.0 * static_cast<double>(n) + 0.5) * (two_pi / rabi);

    SensitivityProfile profile;
    profile.window = window;
    profile.beta_k = beta_k;
    profile.f_s = f_s;
    profile.betas.reserve(2 * n);
    profile.centers.reserve(2 * n);
    for (std::size_t u = 0; u < 2 * n; ++u) {
        const double t_n = (1.0 + 2.0 * static_cast<double>(u)) * (two_pi / rabi);
        const double w = modulation_window(window, t_n, t_total);
        profile.centers.push_back(t_n);
        profile.betas.push_back(w * beta_k * std::sin(two_pi * f_s * t_n));
    }

    PulseProgram prog;
    prog.kind = SequenceKind::dysco_modulated;
    prog.n_units = n;
    prog.rabi = rabi;
    prog.readout_inverted = true;
    prog.pulses.reserve(8 * n + 1);
    for (std::size_t u = 0; u < n; ++u)
        detail::append_unit_forward(prog.pulses, phase_for_sensitivity(profile.betas[u]),
                                    t_pi, rabi);
    prog.pulses.push_back({t_pi, rabi, 0.5 * pi, 0.0, "pi_y"});
    for (std::size_t u = n; u < 2 * n; ++u)
        detail::append_unit_mirrored(prog.pulses, phase_for_sensitivity(profile.betas[u]),
                                     t_pi, rabi);
    prog.total_time = t_total;
    prog.sensitivity_schedule = std::move(profile);
    return prog;
}

/// pi/2 - tau/2 - pi - tau/2 [- pi/2]. The final pi/2 is off by default,
/// matching the population-encoding comparison; enable it for fringe readout.
inline PulseProgram build_hahn_echo(double tau, double rabi, bool final_half_pulse = false) {
    if (tau <= 0.0) throw std::invalid_argument("build_hahn_echo: tau must be > 0");
    if (rabi <= 0.0) throw std::invalid_argument("build_hahn_echo: rabi must be > 0");
    const double t_pi = pi / rabi;
    const double t_half = 0.5 * t_pi;
    PulseProgram prog;
    prog.kind = SequenceKind::hahn_echo;
    prog.n_units = 1;
    prog.rabi = rabi;
    prog.pulses.push_back({t_half, rabi, 0.0, 0.0, "pi_half_x"});
    prog.pulses.push_back({0.5 * tau, 0.0, 0.0, 0.0, "free"});
    prog.pulses.push_back({t_pi, rabi, 0.0, 0.0, "pi_x"});
    prog.pulses.push_back({0.5 * tau, 0.0, 0.0, 0.0, "free"});
    if (final_half_pulse)
        prog.pulses.push_back({t_half, rabi, 0.0, 0.0, "pi_half_x"});
    long double t = 0.0L;
    for (const Pulse& p : prog.pulses) t += p.duration;
    prog.total_time = static_cast<double>(t);
    return prog;
}

/// Bracketed XY8: pi/2_x, M repeats of (x y x y y x y x) pi pulses at
/// center-to-center spacing tau, pi/2_xbar. Zero-field net is identity.
inline PulseProgram build_xy8(std::size_t m, double tau, double rabi) {
    if (m < 1) throw std::invalid_argument("build_xy8: repetitions must be >= 1");
    if (rabi <= 0.0) throw std::invalid_argument("build_xy8: rabi must be > 0");
    const double t_pi = pi / rabi;
    if (tau <= t_pi)
        throw std::invalid_argument("build_xy8: spacing too short, tau must exceed pi/rabi");
    const double t_half = 0.5 * t_pi;
    static constexpr double xy8_phase[8] = {0.0, 0.5 * pi, 0.0, 0.5 * pi,
                                            0.5 * pi, 0.0, 0.5 * pi, 0.0};
    static constexpr const char* xy8_label[8] = {"pi_x", "pi_y", "pi_x", "pi_y",
                                                 "pi_y", "pi_x", "pi_y", "pi_x"};
    PulseProgram prog;
    prog.kind = SequenceKind::xy8;
    prog.n_units = m;
    prog.rabi = rabi;
    prog.pulses.push_back({t_half, rabi, 0.0, 0.0, "pi_half_x"});
    // Edge gaps tau/2, interior gaps tau, measured center to center.
    const double edge_gap = 0.5 * tau - 0.5 * t_pi;
    const double gap = tau - t_pi;
    prog.pulses.push_back({edge_gap, 0.0, 0.0, 0.0, "free"});
    const std::size_t total = 8 * m;
    for (std::size_t j = 0; j < total; ++j) {
        prog.pulses.push_back({t_pi, rabi, xy8_phase[j % 8], 0.0, xy8_label[j % 8]});
        prog.pulses.push_back({j + 1 < total ? gap : edge_gap, 0.0, 0.0, 0.0, "free"});
    }
    prog.pulses.push_back({t_half, rabi, pi, 0.0, "pi_half_xbar"});
    long double t = 0.0L;
    for (const Pulse& p : prog.pulses) t += p.duration;
    prog.total_time = static_cast<double>(t);
    return prog;
}

namespace detail {

inline bool phase_close(double a, double b, double tol = 1e-9) {
    double d = std::fmod(a - b, two_pi);
    if (d > pi) d -= two_pi;
    if (d < -pi) d += two_pi;
    return std::fabs(d) < tol;
}

// Checks one 4-pulse unit against the forward or mirrored pattern and
// recovers its phi. Returns false on any mismatch.
inline bool match_unit(const Pulse* p, bool mirrored, double& phi_out) {
    const double t0 = p[0].phase, t1 = p[1].phase, t2 = p[2].phase, t3 = p[3].phase;
    if (!mirrored) {
        // [pi-phi, -phi, +phi, pi+phi]
        phi_out = t2;
        return phase_close(t1, -phi_out) && phase_close(t0, pi - phi_out) &&
               phase_close(t3, pi + phi_out);
    }
    // [-phi, pi-phi, pi+phi, +phi]
    phi_out = t3;
    return phase_close(t0, -phi_out) && phase_close(t1, pi - phi_out) &&
           phase_close(t2, pi + phi_out);
}

}  // namespace detail

/// Structural validation; returns an empty list when the program satisfies
/// its sequence-kind invariants.
inline std::vector<std::string> validate(const PulseProgram& prog) {
    std::vector<std::string> errors;
    if (prog.pulses.empty()) {
        errors.push_back("program has no pulses");
        return errors;
    }
    for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
        const Pulse& p = prog.pulses[i];
        if (!(p.duration > 0.0))
            errors.push_back("pulse " + std::to_string(i) + ": non-positive duration");
        if (p.rabi < 0.0)
            errors.push_back("pulse " + std::to_string(i) + ": negative rabi");
        if (!std::isfinite(p.phase) || !std::isfinite(p.duration) || !std::isfinite(p.rabi))
            errors.push_back("pulse " + std::to_string(i) + ": non-finite field");
    }
    if (!errors.empty()) return errors;

    if (prog.kind == SequenceKind::dysco || prog.kind == SequenceKind::dysco_modulated) {
        const std::size_t n = prog.n_units;
        if (prog.pulses.size() != 8 * n + 1) {
            errors.push_back("mirror symmetry broken: expected 8N+1 pulses around a middle pi_y, got " +
                             std::to_string(prog.pulses.size()));
            return errors;
        }
        for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
            const Pulse& p = prog.pulses[i];
            if (std::fabs(p.rabi * p.duration - pi) > 1e-12 * pi)
                errors.push_back("pulse " + std::to_string(i) + ": not a pi pulse");
        }
        const Pulse& mid = prog.pulses[4 * n];
        if (!detail::phase_close(mid.phase, 0.5 * pi))
            errors.push_back("middle pulse is not pi_y");
        for (std::size_t u = 0; u < n; ++u) {
            double phi_f = 0.0, phi_m = 0.0;
            if (!detail::match_unit(&prog.pulses[4 * u], false, phi_f))
                errors.push_back("unit " + std::to_string(u) + ": forward phase pattern broken");
            if (!detail::match_unit(&prog.pulses[4 * n + 1 + 4 * u], true, phi_m))
                errors.push_back("unit " + std::to_string(n + u) + ": mirrored phase pattern broken");
            if (prog.kind == SequenceKind::dysco &&
                (!detail::phase_close(phi_f, prog.phi) || !detail::phase_close(phi_m, prog.phi)))
                errors.push_back("unit " + std::to_string(u) + ": phase differs from program phi");
        }
        const double expect_t = (4.0 * static_cast<double>(n) + 0.5) * (two_pi / prog.rabi);
        if (std::fabs(prog.total_time - expect_t) > 1e-12 * expect_t)
            errors.push_back("total_time differs from (4N + 1/2) * 2*pi / rabi");
        if (prog.sensitivity_schedule) {
            const SensitivityProfile& sp = *prog.sensitivity_schedule;
            if (sp.betas.size() != 2 * n || sp.centers.size() != 2 * n)
                errors.push_back("sensitivity schedule size mismatch");
            for (double b : sp.betas)
                if (std::fabs(b) > sp.beta_k + 1e-12)
                    errors.push_back("sensitivity schedule exceeds beta_k");
        }
    } else {
        double t_sum = 0.0;
        for (const Pulse& p : prog.pulses) {
            if (p.rabi > 0.0) {
                const double area = p.rabi * p.duration;
                if (std::fabs(area - pi) > 1e-9 && std::fabs(area - 0.5 * pi) > 1e-9)
                    errors.push_back("drive pulse is neither pi nor pi/2");
            }
            t_sum += p.duration;
        }
        if (std::fabs(t_sum - prog.total_time) > 1e-9 * prog.total_time)
            errors.push_back("total_time differs from summed durations");
    }
    return errors;
}

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// One record per pulse: index,start_s,duration_s,rabi_rad_s,phase_rad,label.
/// Header line carries the build parameters.
inline void export_program(const PulseProgram& prog, std::ostream& os) {
    os << "# " << sequence_name(prog.kind)
       << " rabi_rad_s=" << detail::fmt_g17(prog.rabi)
       << " n_units=" << prog.n_units;
    if (prog.kind == SequenceKind::dysco)
        os << " phi_rad=" << detail::fmt_g17(prog.phi);
    if (prog.sensitivity_schedule) {
        const SensitivityProfile& sp = *prog.sensitivity_schedule;
        os << " f_s_hz=" << detail::fmt_g17(sp.f_s)
           << " beta_k=" << detail::fmt_g17(sp.beta_k)
           << " window=" << window_name(sp.window);
    }
    os << " total_time_s=" << detail::fmt_g17(prog.total_time) << "\n";
    const std::vector<double> starts = prog.start_times();
    for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
        const Pulse& p = prog.pulses[i];
        os << i << ',' << detail::fmt_g17(starts[i]) << ',' << detail::fmt_g17(p.duration)
           << ',' << detail::fmt_g17(p.rabi) << ',' << detail::fmt_g17(p.phase)
           << ',' << p.label << "\n";
    }
}

}  // namespace dysco
