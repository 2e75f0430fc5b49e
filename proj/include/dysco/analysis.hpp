#pragma once

// Spectral analysis of population responses: response spectra S(zeta),
// dominant-component extraction, sensitivity curves, sequence filter
// functions, coherence integrals and dynamic-range estimation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dysco/constants.hpp"
#include "dysco/fft.hpp"
#include "dysco/pulse.hpp"

namespace dysco {

/// Magnitude spectrum over a frequency-like coordinate (strictly increasing).
struct Spectrum {
    std::vector<double> coord;
    std::vector<double> magnitude;
};

/// F(omega) = omega^2/2 |g-hat(omega)|^2 tabulated on an omega grid.
struct FilterFunction {
    std::vector<double> omega;   // rad/s
    std::vector<double> values;  // >= 0
    double duration = 0.0;       // s, span of the g(t) it was built from
};

inline constexpr int spectrum_zero_pad_factor = 8;

/// Mean-subtracted, Hann-windowed, zero-padded magnitude spectrum of a
/// uniformly sampled series. `dstep` is the sample spacing of the swept
/// variable; the coordinate is its conjugate (cycles per unit of it).
/// Magnitudes are scaled so a full-range pure cosine reports its amplitude.
inline Spectrum response_spectrum(const std::vector<double>& series, double dstep) {
    if (series.size() < 16)
        throw std::invalid_argument("response_spectrum: need at least 16 uniform samples");
    if (!(dstep > 0.0))
        throw std::invalid_argument("response_spectrum: sample spacing must be > 0");
    const std::size_t n = series.size();
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t nfft = next_pow2(n) * spectrum_zero_pad_factor;
    std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) /
                                               static_cast<double>(n)));
        wsum += w;
        buf[i] = (series[i] - mean) * w;
    }
    fft_inplace(buf);

    Spectrum spec;
    spec.coord.reserve(nfft / 2 + 1);
    spec.magnitude.reserve(nfft / 2 + 1);
    const double scale = wsum > 0.0 ? 2.0 / wsum : 0.0;
    for (std::size_t k = 0; k <= nfft / 2; ++k) {
        spec.coord.push_back(static_cast<double>(k) /
                             (static_cast<double>(nfft) * dstep));
        spec.magnitude.push_back(scale * std::abs(buf[k]));
    }
    return spec;
}

struct DominantComponent {
    double coord = 0.0;
    double magnitude = 0.0;
    bool significant = false;  // magnitude >= 5x median bin magnitude
};

/// Largest non-DC bin, refined by three-point parabolic interpolation.
inline DominantComponent dominant_component(const Spectrum& spec) {
    if (spec.magnitude.size() < 3)
        throw std::invalid_argument("dominant_component: degenerate spectrum");
    std::size_t best = 1;
    for (std::size_t k = 2; k + 1 < spec.magnitude.size(); ++k)
        if (spec.magnitude[k] > spec.magnitude[best]) best = k;

    const double ym = spec.magnitude[best - 1];
    const double y0 = spec.magnitude[best];
    const double yp = best + 1 < spec.magnitude.size() ? spec.magnitude[best + 1] : 0.0;
    double delta = 0.0;
    const double denom = ym - 2.0 * y0 + yp;
    if (denom != 0.0) delta = 0.5 * (ym - yp) / denom;
    if (delta > 0.5) delta = 0.5;
    if (delta < -0.5) delta = -0.5;
    const double dk = spec.coord[1] - spec.coord[0];

    std::vector<double> sorted(spec.magnitude.begin() + 1, spec.magnitude.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];

    DominantComponent out;
    out.coord = spec.coord[best] + delta * dk;
    out.magnitude = y0;
    out.significant = y0 >= 5.0 * median && y0 > 0.0;
    return out;
}

/// beta(phi) extracted from per-phi response rows and its fit against
/// |sin(phi)| after normalization to max 1.
struct SensitivityCurve {
    std::vector<double> phi;
    std::vector<double> beta;      // normalized to max 1
    std::vector<double> residual;  // beta - |sin(phi)|
    double r_squared = 0.0;
    double max_residual = 0.0;
};

/// Per-row dominant zeta of P0(B_RF), insignificant rows reported as zero.
/// `rows[i]` is the uniformly sampled response at phi_grid[i].
inline SensitivityCurve sensitivity_curve(const std::vector<double>& phi_grid,
                                          const std::vector<std::vector<double>>& rows,
                                          double b_step) {
    if (phi_grid.size() != rows.size() || phi_grid.empty())
        throw std::invalid_argument("sensitivity_curve: grid/row mismatch");
    SensitivityCurve curve;
    curve.phi = phi_grid;
    curve.beta.resize(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DominantComponent dom = dominant_component(response_spectrum(rows[i], b_step));
        if (dom.significant) curve.beta[i] = std::fabs(dom.coord);
    }
    const double peak = *std::max_element(curve.beta.begin(), curve.beta.end());
    if (peak <= 0.0)
        throw std::invalid_argument("sensitivity_curve: no significant response in any row");
    for (double& b : curve.beta) b /= peak;

    double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
    for (double b : curve.beta) mean += b;
    mean /= static_cast<double>(curve.beta.size());
    curve.residual.resize(curve.beta.size());
    for (std::size_t i = 0; i < curve.beta.size(); ++i) {
        const double r = curve.beta[i] - std::fabs(std::sin(phi_grid[i]));
        curve.residual[i] = r;
        ss_res += r * r;
        ss_tot += (curve.beta[i] - mean) * (curve.beta[i] - mean);
        curve.max_residual = std::max(curve.max_residual, std::fabs(r));
    }
    curve.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return curve;
}

/// Continuous-transform approximation g-hat(omega) = sum_j g_j e^{i omega t_j} dt
/// over midpoint samples, then F = omega^2 |g-hat|^2 / 2.
inline FilterFunction filter_function(const std::vector<double>& g, double dt,
                                      const std::vector<double>& omega_grid) {
    if (g.empty() || !(dt > 0.0))
        throw std::invalid_argument("filter_function: empty samples or bad dt");
    FilterFunction ff;
    ff.omega = omega_grid;
    ff.values.reserve(omega_grid.size());
    ff.duration = dt * static_cast<double>(g.size());
    for (const double w : omega_grid) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double t = (static_cast<double>(j) + 0.5) * dt;
            acc += g[j] * std::complex<double>(std::cos(w * t), std::sin(w * t));
        }
        const double mod = std::abs(acc) * dt;
        ff.values.push_back(0.5 * w * w * mod * mod);
    }
    return ff;
}

/// Instantaneous sensitivity g(t) of a program sampled on a uniform grid of
/// n points over its duration. DYSCO holds the per-unit target sensitivity
/// across each unit (zero over the middle pi_y slot); echo sequences toggle
/// +-1 between pi pulses and are zero outside the bracketed window.
inline std::vector<double> sensitivity_function(const PulseProgram& prog, std::size_t n) {
    if (n < 2) throw std::invalid_argument("sensitivity_function: need n >= 2");
    std::vector<double> g(n, 0.0);
    const double dt = prog.total_time / static_cast<double>(n);
    if (prog.kind == SequenceKind::dysco || prog.kind == SequenceKind::dysco_modulated) {
        const std::size_t n_units = prog.n_units;
        const double unit_t = 4.0 * pi / prog.rabi;
        const double mid_start = static_cast<double>(n_units) * unit_t;
        const double mid_end = mid_start + pi / prog.rabi;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = (static_cast<double>(i) + 0.5) * dt;
            if (t >= mid_start && t < mid_end) continue;
            const double t_adj = t < mid_start ? t : t - (mid_end - mid_start);
            const std::size_t unit = std::min<std::size_t>(
                static_cast<std::size_t>(t_adj / unit_t), 2 * n_units - 1);
            if (prog.sensitivity_schedule)
                g[i] = prog.sensitivity_schedule->betas[unit];
            else
                g[i] = std::sin(prog.phi);
        }
        return g;
    }
    // Echo-style toggling: +1 after the opening pi/2, sign flip at every pi
    // pulse center, zero outside the bracketed window.
    const std::vector<double> starts = prog.start_times();
    std::vector<double> flip_times;
    double window_start = 0.0, window_end = prog.total_time;
    for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
        const Pulse& p = prog.pulses[i];
        if (p.rabi <= 0.0) continue;
        const double area = p.rabi * p.duration;
        if (std::fabs(area - 0.5 * pi) < 1e-9) {
            if (starts[i] < 0.5 * prog.total_time)
                window_start = starts[i] + p.duration;
            else
                window_end = starts[i];
        } else {
            flip_times.push_back(starts[i] + 0.5 * p.duration);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * dt;
        if (t < window_start || t >= window_end) continue;
        std::size_t flips = 0;
        for (const double ft : flip_times)
            if (ft <= t) ++flips;
        g[i] = (flips % 2 == 0) ? 1.0 : -1.0;
    }
    return g;
}

/// chi(t) = (1/pi) * integral S(omega) F(omega) / omega^2 d omega over the
/// filter grid, with adaptive Simpson refinement between nodes (relative
/// tolerance 1e-6). F is interpolated linearly; S is the model function.
inline double coherence_integral(const std::function<double(double)>& noise_spectrum,
                                 const FilterFunction& filter) {
    if (filter.omega.size() < 2)
        throw std::invalid_argument("coherence_integral: filter grid too small");
    // Quadratic interpolation through the three nearest nodes: the filter is
    // locally parabolic at its nulls, where a linear chord would bias the
    // 1/omega^2-weighted integral high. Clamped at zero (F >= 0).
    const auto f_interp = [&](double w) -> double {
        const auto it = std::lower_bound(filter.omega.begin(), filter.omega.end(), w);
        if (it == filter.omega.begin()) return filter.values.front();
        if (it == filter.omega.end()) return filter.values.back();
        std::size_t hi = static_cast<std::size_t>(it - filter.omega.begin());
        std::size_t lo = hi - 1;
        std::size_t i0;
        if (lo == 0)
            i0 = 0;
        else if (hi + 1 >= filter.omega.size())
            i0 = filter.omega.size() - 3;
        else
            i0 = (w - filter.omega[lo] < filter.omega[hi] - w) ? lo - 1 : lo;
        const double x0 = filter.omega[i0], x1 = filter.omega[i0 + 1], x2 = filter.omega[i0 + 2];
        const double y0 = filter.values[i0], y1 = filter.values[i0 + 1], y2 = filter.values[i0 + 2];
        const double f = y0 * (w - x1) * (w - x2) / ((x0 - x1) * (x0 - x2)) +
                         y1 * (w - x0) * (w - x2) / ((x1 - x0) * (x1 - x2)) +
                         y2 * (w - x0) * (w - x1) / ((x2 - x0) * (x2 - x1));
        return f > 0.0 ? f : 0.0;
    };
    const auto integrand = [&](double w) -> double {
        if (w <= 0.0) return 0.0;
        return noise_spectrum(w) * f_interp(w) / (w * w);
    };
    // adaptive Simpson on each grid interval
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fm, double fb, double whole,
            int depth) -> double {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = integrand(lm), frm = integrand(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::fabs(left + right - whole) <=
                              1e-6 * (std::fabs(left + right) + 1e-300))
            return left + right;
        return simpson(a, m, fa, flm, fm, left, depth - 1) +
               simpson(m, b, fm, frm, fb, right, depth - 1);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < filter.omega.size(); ++i) {
        const double a = filter.omega[i], b = filter.omega[i + 1];
        if (!(b > a)) throw std::invalid_argument("coherence_integral: non-increasing grid");
        const double fa = integrand(a), fb = integrand(b);
        const double fm = integrand(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(a, b, fa, fm, fb, whole, 20);
    }
    // coverage check against the filter envelope: the spectral weight left
    // beyond the grid edge must be negligible (the filter itself may sit on
    // a null right at the edge)
    const double w_max = filter.omega.back();
    const double f_peak = *std::max_element(filter.values.begin(), filter.values.end());
    const double tail = noise_spectrum(w_max) * f_peak / (w_max * w_max) * w_max;
    if (tail > 1e-3 * (std::fabs(total) + 1e-300))
        throw std::invalid_argument("coherence_integral: grid does not cover the noise spectrum");
    return total / pi;
}

/// Max |dP0/dx| via central differences on a 3-point smoothed series.
inline double max_slope(const std::vector<double>& series, double dstep) {
    if (series.size() < 5 || !(dstep > 0.0))
        throw std::invalid_argument("max_slope: need >= 5 samples");
    std::vector<double> smooth(series.size());
    smooth.front() = series.front();
    smooth.back() = series.back();
    for (std::size_t i = 1; i + 1 < series.size(); ++i)
        smooth[i] = (series[i - 1] + series[i] + series[i + 1]) / 3.0;
    double best = 0.0;
    for (std::size_t i = 1; i + 1 < smooth.size(); ++i)
        best = std::max(best, std::fabs(smooth[i + 1] - smooth[i - 1]) / (2.0 * dstep));
    return best;
}

/// Ratio of maximum response slopes between the most and least sensitive
/// settings: the dynamic-range figure of merit.
inline double dynamic_range(const std::vector<double>& p0_soft,
                            const std::vector<double>& p0_max, double dstep) {
    const double s_soft = max_slope(p0_soft, dstep);
    const double s_max = max_slope(p0_max, dstep);
    if (s_soft <= 0.0)
        throw std::invalid_argument("dynamic_range: flat low-sensitivity response");
    return s_max / s_soft;
}

/// Reconstructed theoretical DR bound T_DYSCO * Omega / (9 pi): the ratio of
/// the largest (1/t_N at N = 1) to smallest (1/T_DYSCO) usable modulation
/// bandwidth. The source quotes only the end figure; the formula is our
/// reconstruction and is labeled as such wherever it is reported.
inline double theoretical_dr_bound(double rabi, double t_dysco) {
    return t_dysco * rabi / (9.0 * pi);
}

/// Crossings of `series` through `level`, for unambiguous oscillation
/// counting on a ramp that starts at zero sensitivity.
inline std::size_t count_level_crossings(const std::vector<double>& series, double level) {
    std::size_t count = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double a = series[i - 1] - level;
        const double b = series[i] - level;
        if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) ++count;
    }
    return count;
}

}  // namespace dysco
