#pragma once

// Two-level spin state over {|0>, |->} and the exact SU(2) propagator for
// piecewise-constant effective Hamiltonians.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "dysco/constants.hpp"

namespace dysco {

using cplx = std::complex<double>;

/// Normalized amplitude pair over the ordered basis (|0>, |->).
struct SpinState {
    cplx amp0{1.0, 0.0};
    cplx ampm{0.0, 0.0};

    double norm_squared() const {
        return std::norm(amp0) + std::norm(ampm);
    }

    SpinState normalized() const {
        const double n = std::sqrt(norm_squared());
        if (n <= 0.0) throw std::domain_error("cannot normalize zero state");
        return {amp0 / n, ampm / n};
    }
};

/// Angular-frequency components of H = -(1/2)(hx*sx + hy*sy + hz*sz), rad/s.
struct EffectiveField {
    double hx = 0.0;
    double hy = 0.0;
    double hz = 0.0;

    double magnitude() const {
        return std::sqrt(hx * hx + hy * hy + hz * hz);
    }
};

/// 2x2 complex propagator.
struct Unitary2 {
    cplx u00{1.0, 0.0};
    cplx u01{0.0, 0.0};
    cplx u10{0.0, 0.0};
    cplx u11{1.0, 0.0};

    SpinState apply(const SpinState& s) const {
        return {u00 * s.amp0 + u01 * s.ampm, u10 * s.amp0 + u11 * s.ampm};
    }

    /// this * rhs (rhs acts first).
    Unitary2 compose(const Unitary2& rhs) const {
        return {u00 * rhs.u00 + u01 * rhs.u10, u00 * rhs.u01 + u01 * rhs.u11,
                u10 * rhs.u00 + u11 * rhs.u10, u10 * rhs.u01 + u11 * rhs.u11};
    }

    Unitary2 adjoint() const {
        return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
    }
};

/// Drive term -(rabi/2)(e^{i theta}|0><-| + h.c.) plus the diagonal shift
/// eps = -detuning + gamma_nv * b_rf, mapped onto the traceless field
/// (rabi cos theta, -rabi sin theta, eps). The |+> level is outside the
/// simulated subspace; its Zeeman term is dropped.
inline EffectiveField effective_field(double rabi, double detuning, double theta,
                                      double b_rf, double gamma_nv) {
    if (rabi < 0.0) throw std::invalid_argument("effective_field: rabi must be >= 0");
    return {rabi * std::cos(theta), -rabi * std::sin(theta),
            -detuning + gamma_nv * b_rf};
}

/// Closed-form U = exp(+i (duration/2) h.sigma) for H = -(1/2) h.sigma:
/// a rotation by |h|*duration about h/|h|. No series truncation.
inline Unitary2 rotation(const EffectiveField& field, double duration) {
    if (duration < 0.0) throw std::invalid_argument("rotation: duration must be >= 0");
    const double mag = field.magnitude();
    const double angle = mag * duration;
    if (angle == 0.0) return {};
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const double ax = field.hx / mag;
    const double ay = field.hy / mag;
    const double az = field.hz / mag;
    return {cplx(c, s * az), cplx(s * ay, s * ax),
            cplx(-s * ay, s * ax), cplx(c, -s * az)};
}

/// Occupancy of |0>.
inline double p0(const SpinState& s) { return std::norm(s.amp0); }

/// Occupancy of |->.
inline double pm(const SpinState& s) { return std::norm(s.ampm); }

/// Bloch projections (<sx>, <sy>, <sz>); |0> sits at +z.
inline std::array<double, 3> bloch(const SpinState& s) {
    const cplx cross = std::conj(s.amp0) * s.ampm;
    return {2.0 * cross.real(), 2.0 * cross.imag(),
            std::norm(s.amp0) - std::norm(s.ampm)};
}

/// Stretched-exponential contrast decay applied to an ideal population,
/// pulling it toward the fully mixed value 1/2. Phenomenological stand-in
/// for rotating-frame relaxation; not part of the coherent propagation.
inline double apply_contrast_envelope(double p0_ideal, double t, double tau, double p) {
    if (tau <= 0.0) throw std::invalid_argument("contrast envelope: tau must be > 0");
    if (p <= 0.0) throw std::invalid_argument("contrast envelope: exponent must be > 0");
    return 0.5 + (p0_ideal - 0.5) * std::exp(-std::pow(t / tau, p));
}

}  // namespace dysco
