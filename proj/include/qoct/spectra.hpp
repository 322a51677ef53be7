#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qoct/errors.hpp"
#include "qoct/quadrature.hpp"

namespace qoct {

/// Double-Gaussian two-photon spectral density |f(w1, w2)|^2.
///
/// The pump factor constrains w1 + w2 around 2*omega0 with standard deviation
/// `pump_std`; the phase-matching factor constrains w1 - w2 with standard
/// deviation `phase_matching_std`. A positive `detuning` splits the
/// phase-matching factor into two lobes at w1 - w2 = +-2*detuning.
/// All frequencies in rad/fs.
struct BiphotonSpectrum {
    double omega0 = 0.0;             // half the pump frequency
    double pump_std = 0.0;           // pump spectral StD
    double phase_matching_std = 0.0; // phase-matching StD
    double detuning = 0.0;           // 0 for degenerate SPDC

    bool degenerate() const noexcept { return detuning == 0.0; }

    /// pump_std^2 + phase_matching_std^2
    double combined_variance() const noexcept {
        return pump_std * pump_std + phase_matching_std * phase_matching_std;
    }

    void validate() const {
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidArgument("spectrum.omega0 must be > 0");
        if (!(pump_std > 0.0) || !std::isfinite(pump_std)) throw InvalidArgument("spectrum.pump_std must be > 0");
        if (!(phase_matching_std > 0.0) || !std::isfinite(phase_matching_std))
            throw InvalidArgument("spectrum.phase_matching_std must be > 0");
        if (!(detuning >= 0.0) || !std::isfinite(detuning)) throw InvalidArgument("spectrum.detuning must be >= 0");
    }
};

namespace detail {

inline double gauss_factor(double x, double sigma) { return std::exp(-x * x / (2.0 * sigma * sigma)); }

// Two-lobe form. With detuning == 0 it reproduces the single-lobe density.
inline double two_lobe_density(const BiphotonSpectrum& s, double sum_offset, double difference) {
    const double pm = gauss_factor(difference - 2.0 * s.detuning, s.phase_matching_std) +
                      gauss_factor(difference + 2.0 * s.detuning, s.phase_matching_std);
    return pm * gauss_factor(sum_offset, s.pump_std) / (2.0 * std::numbers::pi * s.pump_std * s.phase_matching_std);
}

inline double one_lobe_density(const BiphotonSpectrum& s, double sum_offset, double difference) {
    return gauss_factor(difference, s.phase_matching_std) * gauss_factor(sum_offset, s.pump_std) /
           (std::numbers::pi * s.pump_std * s.phase_matching_std);
}

} // namespace detail

/// Density in rotated coordinates: sum_offset = w1 + w2 - 2*omega0, difference = w1 - w2.
inline double density_rotated(const BiphotonSpectrum& s, double sum_offset, double difference) {
    return s.degenerate() ? detail::one_lobe_density(s, sum_offset, difference)
                          : detail::two_lobe_density(s, sum_offset, difference);
}

/// |f(w1, w2)|^2 in fs^2/rad^2.
inline double density(const BiphotonSpectrum& s, double omega1, double omega2) {
    return density_rotated(s, omega1 + omega2 - 2.0 * s.omega0, omega1 - omega2);
}

/// Integration support in rotated coordinates, truncated at 8 standard deviations.
/// The difference range covers only difference >= 0; the density is even in it.
struct SpectralSupport {
    double sum_half_width = 0.0;
    double difference_lo = 0.0;
    double difference_hi = 0.0;
};

inline constexpr double truncation_sigmas = 8.0;

inline SpectralSupport support(const BiphotonSpectrum& s) {
    SpectralSupport sup;
    sup.sum_half_width = truncation_sigmas * s.pump_std;
    sup.difference_lo = std::max(0.0, 2.0 * s.detuning - truncation_sigmas * s.phase_matching_std);
    sup.difference_hi = 2.0 * s.detuning + truncation_sigmas * s.phase_matching_std;
    return sup;
}

struct NormalizationResult {
    double value = 0.0;
    double error = 0.0;
};

/// Integral of the density over the (w1, w2) plane by nested adaptive quadrature.
/// Throws ConvergenceError (carrying the achieved estimate) if the tolerance is missed.
inline NormalizationResult normalization(const BiphotonSpectrum& s, const quad::Options& opt = {1e-12, 1e-15, 20000}) {
    s.validate();
    const SpectralSupport sup = support(s);
    quad::Options inner_opt = opt;
    inner_opt.abs_tol = opt.abs_tol * 0.1;
    inner_opt.rel_tol = opt.rel_tol * 0.1;
    bool inner_ok = true;

    auto inner = [&](double sum_offset) {
        auto f = [&](double d) { return density_rotated(s, sum_offset, d); };
        auto r = quad::integrate_scalar(f, sup.difference_lo, sup.difference_hi, 4, inner_opt);
        inner_ok = inner_ok && r.converged;
        return r.value;
    };
    // dw1 dw2 = (1/2) d(sum) d(difference); the doubled half-range cancels the 1/2.
    auto r = quad::integrate<1>(inner, -sup.sum_half_width, sup.sum_half_width, 4, opt);
    if (!r.converged || !inner_ok)
        throw ConvergenceError("spectrum normalization did not converge", r.value[0], r.error[0]);
    return {r.value[0], r.error[0]};
}

} // namespace qoct
