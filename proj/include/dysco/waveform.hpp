#pragma once

// Declarative external-field generators: deterministic tones, per-shot
// random phases, and a classical random-oscillator surrogate for the 13C
// nuclear spin bath.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dysco/constants.hpp"
#include "dysco/rng.hpp"

namespace dysco {

struct Tone {
    double amplitude = 0.0;  // tesla
    double frequency = 0.0;  // Hz
    double phase = 0.0;      // rad
};

/// A coupled nuclear spin shows up as a pair of resolved lines split by
/// `offset_hz` around the bath center.
struct CoupledSpin {
    double offset_hz = 0.0;
    double amplitude = 0.0;  // tesla, per line
};

/// Frequency-inhomogeneous ensemble of classical oscillators. Each shot
/// draws fresh frequencies Normal(center, spread) and uniform phases, which
/// reproduces the incoherent Larmor-band response of the nuclear bath
/// without a quantum bath model.
struct BathSurrogate {
    double larmor_center_hz = 0.0;
    double larmor_spread_hz = 0.0;
    std::size_t n_oscillators = 1;
    double rms_amplitude = 0.0;  // tesla, RMS of the summed continuum
    std::vector<CoupledSpin> coupled_spins;
};

enum class ShotPhaseMode { fixed, random_per_shot };

struct Waveform {
    std::vector<Tone> tones;
    std::optional<BathSurrogate> bath;
    ShotPhaseMode shot_phase_mode = ShotPhaseMode::fixed;
};

/// Pointwise sum of two waveforms. At most one operand may carry a bath.
inline Waveform multiplex(const Waveform& a, const Waveform& b) {
    if (a.bath && b.bath)
        throw std::invalid_argument("multiplex: both waveforms carry a bath");
    Waveform out = a;
    out.tones.insert(out.tones.end(), b.tones.begin(), b.tones.end());
    if (b.bath) out.bath = b.bath;
    if (b.shot_phase_mode == ShotPhaseMode::random_per_shot)
        out.shot_phase_mode = ShotPhaseMode::random_per_shot;
    return out;
}

/// One realized oscillator of a shot (bath line or coupled-spin line).
struct OscillatorState {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase = 0.0;
};

/// Frozen per-shot randomness; a waveform plus its ShotContext is a pure
/// function of time.
struct ShotContext {
    std::vector<double> tone_phases;          // one per tone
    std::vector<OscillatorState> oscillators; // bath continuum + coupled lines
};

/// Realize the randomness of one shot. Deterministic in (seed, shot_index);
/// draw order is bath continuum, coupled lines, then tone phases, so adding
/// a tone to a bath scenario leaves the bath realization unchanged.
inline ShotContext draw_shot(const Waveform& w, std::uint64_t seed,
                             std::uint64_t shot_index) {
    Rng rng(derive_stream(seed, shot_index));
    ShotContext ctx;
    if (w.bath) {
        const BathSurrogate& bath = *w.bath;
        if (bath.n_oscillators < 1)
            throw std::invalid_argument("bath surrogate needs n_oscillators >= 1");
        const double line_amp =
            bath.rms_amplitude * std::sqrt(2.0 / static_cast<double>(bath.n_oscillators));
        ctx.oscillators.reserve(bath.n_oscillators + 2 * bath.coupled_spins.size());
        for (std::size_t i = 0; i < bath.n_oscillators; ++i) {
            OscillatorState osc;
            osc.amplitude = line_amp;
            osc.frequency_hz = bath.larmor_center_hz + bath.larmor_spread_hz * rng.gaussian();
            osc.phase = rng.uniform_angle();
            ctx.oscillators.push_back(osc);
        }
        for (const CoupledSpin& cs : bath.coupled_spins) {
            for (double sign : {-0.5, 0.5}) {
                OscillatorState osc;
                osc.amplitude = cs.amplitude;
                osc.frequency_hz = bath.larmor_center_hz + sign * cs.offset_hz;
                osc.phase = rng.uniform_angle();
                ctx.oscillators.push_back(osc);
            }
        }
    }
    ctx.tone_phases.assign(w.tones.size(), 0.0);
    if (w.shot_phase_mode == ShotPhaseMode::random_per_shot)
        for (double& th : ctx.tone_phases) th = rng.uniform_angle();
    return ctx;
}

/// B_RF(t) for one realized shot: sum of tones a*cos(2 pi f t + theta +
/// theta_shot) plus the realized bath oscillators.
inline double sample(const Waveform& w, double t, const ShotContext& ctx) {
    double b = 0.0;
    for (std::size_t i = 0; i < w.tones.size(); ++i) {
        const Tone& tone = w.tones[i];
        b += tone.amplitude * std::cos(two_pi * tone.frequency * t + tone.phase +
                                       ctx.tone_phases[i]);
    }
    for (const OscillatorState& osc : ctx.oscillators)
        b += osc.amplitude * std::cos(two_pi * osc.frequency_hz * t + osc.phase);
    return b;
}

/// True when every sample is independent of t and shot randomness.
inline bool is_static(const Waveform& w) {
    if (w.bath) return false;
    if (w.shot_phase_mode == ShotPhaseMode::random_per_shot && !w.tones.empty()) return false;
    for (const Tone& tone : w.tones)
        if (tone.frequency != 0.0) return false;
    return true;
}

}  // namespace dysco
