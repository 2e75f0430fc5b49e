#pragma once

// Piecewise-constant propagation of the driven spin under an arbitrary
// external field. Within each pulse the field is sampled at substep
// midpoints and each substep applies the exact closed-form rotation.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dysco/pulse.hpp"
#include "dysco/spin.hpp"
#include "dysco/waveform.hpp"

namespace dysco {

inline constexpr int default_substeps_per_pulse = 16;

inline SpinState propagate(SpinState state, const PulseProgram& prog,
                           const Waveform& waveform, const ShotContext& shot,
                           double gamma_nv, int substeps_per_pulse) {
    if (substeps_per_pulse < 1)
        throw std::invalid_argument("propagate: substeps_per_pulse must be >= 1");
    long double t = 0.0L;
    for (const Pulse& p : prog.pulses) {
        if (!(p.duration > 0.0))
            throw std::invalid_argument("propagate: invalid program (non-positive duration)");
        const double dt = p.duration / substeps_per_pulse;
        const double t0 = static_cast<double>(t);
        for (int s = 0; s < substeps_per_pulse; ++s) {
            const double t_mid = t0 + (s + 0.5) * dt;
            const double b = sample(waveform, t_mid, shot);
            state = rotation(effective_field(p.rabi, p.detuning, p.phase, b, gamma_nv), dt)
                        .apply(state);
        }
        t += static_cast<long double>(p.duration);
    }
    return state.normalized();
}

/// Bloch-vector sample along a propagated trajectory.
struct TracePoint {
    double t = 0.0;
    std::size_t pulse_index = 0;
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Same walk as propagate(), recording the Bloch vector at every substep
/// boundary, tagged by pulse index for per-pulse coloring.
inline std::vector<TracePoint> propagate_trace(SpinState state, const PulseProgram& prog,
                                               const Waveform& waveform,
                                               const ShotContext& shot, double gamma_nv,
                                               int substeps_per_pulse) {
    if (substeps_per_pulse < 1)
        throw std::invalid_argument("propagate_trace: substeps_per_pulse must be >= 1");
    std::vector<TracePoint> trace;
    trace.reserve(prog.pulses.size() * substeps_per_pulse + 1);
    auto record = [&](double time, std::size_t idx) {
        const auto v = bloch(state);
        trace.push_back({time, idx, v[0], v[1], v[2]});
    };
    record(0.0, 0);
    long double t = 0.0L;
    for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
        const Pulse& p = prog.pulses[i];
        if (!(p.duration > 0.0))
            throw std::invalid_argument("propagate_trace: invalid program");
        const double dt = p.duration / substeps_per_pulse;
        const double t0 = static_cast<double>(t);
        for (int s = 0; s < substeps_per_pulse; ++s) {
            const double t_mid = t0 + (s + 0.5) * dt;
            const double b = sample(waveform, t_mid, shot);
            state = rotation(effective_field(p.rabi, p.detuning, p.phase, b, gamma_nv), dt)
                        .apply(state);
            record(t0 + (s + 1) * dt, i);
        }
        t += static_cast<long double>(p.duration);
    }
    return trace;
}

/// Population of the program's zero-field endpoint. Sequences with an odd
/// number of inverting pi pulses park the undisturbed spin at |->, so the
/// reported signal is referenced there; an ideal non-interacting run reads 1.
inline double signal_p0(const PulseProgram& prog, const SpinState& final_state) {
    return prog.readout_inverted ? pm(final_state) : p0(final_state);
}

}  // namespace dysco
