#pragma once

#include <cmath>
#include <concepts>
#include <numbers>
#include <string>
#include <vector>

#include "qoct/dsp.hpp"
#include "qoct/efficiency.hpp"
#include "qoct/errors.hpp"
#include "qoct/quadrature.hpp"
#include "qoct/units.hpp"

/// SPDC source brightness: R = S_0 * B_omega with B_omega set by the phase
/// mismatch over the walk-off limited overlap length L_eff = W / Theta_p.
namespace qoct::source {

/// Source bandwidth constant kappa_src = 2 pi x 298 THz sqrt(um), in rad/fs sqrt(um).
/// Not to be confused with the sample dispersion coefficient kappa (fs^2).
inline constexpr double kappa_src = units::thz_to_rad_per_fs(298.0);

struct SourceParams {
    double d_eff = 0.0;         // pm/V
    double pump_power = 0.0;    // mW
    double omega_s = 0.0;       // rad/fs
    double omega_i = 0.0;       // rad/fs
    double n_p = 1.0;
    double n_s = 1.0;
    double n_i = 1.0;
    double walkoff = 0.0;        // Theta_p, rad
    double waist = 0.0;          // W, um
    double crystal_length = 0.0; // L, um
    double pump_wavelength = 0.0; // nm

    double effective_length() const { return waist / walkoff; }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string("source.") + name + " must be > 0");
        };
        positive(d_eff, "d_eff");
        positive(pump_power, "pump_power");
        positive(omega_s, "omega_s");
        positive(omega_i, "omega_i");
        positive(n_p, "n_p");
        positive(n_s, "n_s");
        positive(n_i, "n_i");
        positive(walkoff, "walkoff");
        positive(waist, "waist");
        positive(crystal_length, "crystal_length");
        positive(pump_wavelength, "pump_wavelength");
    }
};

/// Type-I collinear degenerate BBO at 405 nm with the walk-off and waist of
/// the reference experiment. d_eff was tuned once so that S_0/P = 125
/// cps/(THz mW) and is frozen here as a regression fixture.
inline SourceParams reference_design() {
    SourceParams p;
    p.d_eff = 0.6580;
    p.pump_power = 1.0;
    p.omega_s = p.omega_i = units::wavelength_nm_to_rad_per_fs(810.0);
    p.n_p = p.n_s = p.n_i = 1.6606;
    p.walkoff = 3.9 * std::numbers::pi / 180.0;
    p.waist = 5.7;
    p.crystal_length = 1000.0;
    p.pump_wavelength = 405.0;
    return p;
}

/// Factors behind the two "much greater than" conditions; the literature gives only inequalities.
struct ValidityThresholds {
    double overlap_factor = 5.0; // L_eff < L / overlap_factor
    double waist_factor = 5.0;   // W > waist_factor * lambda_p / (pi Theta_p)
};

inline std::vector<std::string> validity_warnings(const SourceParams& p, const ValidityThresholds& th = {}) {
    std::vector<std::string> out;
    const double leff = p.effective_length();
    if (!(leff < p.crystal_length / th.overlap_factor))
        out.push_back("effective overlap length W/Theta_p = " + std::to_string(leff) + " um is not << L = " +
                      std::to_string(p.crystal_length) + " um");
    const double diffraction = p.pump_wavelength * 1e-3 / (std::numbers::pi * p.walkoff);
    if (!(p.waist > th.waist_factor * diffraction))
        out.push_back("waist " + std::to_string(p.waist) + " um is not >> lambda_p/(pi Theta_p) = " +
                      std::to_string(diffraction) + " um");
    return out;
}

/// Spectral coincidence rate S_0 in several unit systems.
struct SpectralRate {
    double per_rad_per_fs = 0.0; // cps per rad/fs
    double per_thz = 0.0;        // cps per THz (ordinary frequency)
    double per_thz_per_mw = 0.0; // cps per THz per mW of pump
    std::vector<std::string> warnings;
};

/// S_0 = 4 d^2 P w_s w_i / (3 pi^3 c^3 eps0 n_p n_s n_i Theta_p^2), evaluated in SI.
inline SpectralRate spectral_rate_S0(const SourceParams& p, const ValidityThresholds& th = {}) {
    p.validate();
    constexpr double c = 299792458.0;         // m/s
    constexpr double eps0 = 8.8541878128e-12; // F/m
    const double d = p.d_eff * 1e-12;         // m/V
    const double power = p.pump_power * 1e-3; // W
    const double ws = p.omega_s * 1e15;       // rad/s
    const double wi = p.omega_i * 1e15;
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    // Pairs per second per rad/s of bandwidth (dimensionless).
    const double s0 = 4.0 * d * d * power * ws * wi /
                      (3.0 * pi3 * c * c * c * eps0 * p.n_p * p.n_s * p.n_i * p.walkoff * p.walkoff);
    SpectralRate r;
    r.per_rad_per_fs = s0 * 1e15;
    r.per_thz = s0 * 2.0 * std::numbers::pi * 1e12;
    r.per_thz_per_mw = r.per_thz / p.pump_power;
    r.warnings = validity_warnings(p, th);
    return r;
}

template <class F>
concept PhaseMismatch = requires(const F& f, double w) {
    { f(w) } -> std::convertible_to<double>;
};

struct BandwidthOptions {
    bool require_decay = true;
    double max_tail = 1e-6;
    double rel_tol = 1e-12;
};

/// B_omega = integral of exp(-3 (dk(w) L_eff / 2)^2) over [lo, hi], dk in rad/um.
template <PhaseMismatch F>
double bandwidth_B(const F& delta_k, double effective_length, double lo, double hi, const BandwidthOptions& opt = {}) {
    if (!(effective_length > 0.0)) throw InvalidArgument("effective overlap length must be > 0");
    if (!(hi > lo)) throw InvalidArgument("bandwidth support must have hi > lo");
    auto weight = [&](double w) {
        const double x = delta_k(w) * effective_length / 2.0;
        return std::exp(-3.0 * x * x);
    };
    if (opt.require_decay) {
        const double tail = std::max(weight(lo), weight(hi));
        if (tail > opt.max_tail)
            throw InvalidArgument("phase-matching weight does not decay at the support edges (tail " +
                                  std::to_string(tail) + ")");
    }
    auto r = quad::integrate_scalar(weight, lo, hi, 16, {opt.rel_tol, 1e-15, 100000});
    if (!r.converged) throw ConvergenceError("bandwidth integral did not converge", r.value[0], r.error[0]);
    return r.value[0];
}

/// B_omega = kappa_src / sqrt(W), rad/fs.
inline double bandwidth_from_waist(double waist_um) {
    if (!(waist_um > 0.0)) throw InvalidArgument("waist must be > 0");
    return kappa_src / std::sqrt(waist_um);
}

/// R = S_0 * B; both in the same frequency unit.
inline double pair_rate(double spectral_rate, double bandwidth) { return spectral_rate * bandwidth; }

/// Generation rate per pump power from the efficiency-corrected M1 spectrum:
/// R_gen/P = 2 int |M1| dw / int |M1| eta(w) eta(w_p - w) dw * R_detected / P.
/// Integrals run by the trapezoid rule over positive-frequency bins where |M1|
/// exceeds `support_fraction` of its peak.
inline double estimate_generated_rate(const dsp::ComplexSpectrum& m1, const EfficiencyCurve& eta_vis, double detected_cps,
                                      double pump_mw, double omega_p, double support_fraction = 1e-3) {
    if (!(pump_mw > 0.0)) throw InvalidArgument("pump power must be > 0");
    if (!(detected_cps >= 0.0)) throw InvalidArgument("detected rate must be >= 0");
    double peak = 0.0;
    for (std::size_t k = 0; k < m1.size(); ++k)
        if (m1.omega_at(k) > 0.0) peak = std::max(peak, std::abs(m1.values[k]));
    if (!(peak > 0.0)) throw InvalidArgument("M1 spectrum is zero on positive frequencies");

    double num = 0.0, den = 0.0;
    double prev_m = 0.0, prev_e = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k < m1.size(); ++k) {
        const double w = m1.omega_at(k);
        const double m = std::abs(m1.values[k]);
        if (w <= 0.0 || m < support_fraction * peak) {
            have_prev = false;
            continue;
        }
        const double e = m * eta_vis(w) * eta_vis(omega_p - w);
        if (have_prev) {
            num += 0.5 * (prev_m + m) * m1.omega_step;
            den += 0.5 * (prev_e + e) * m1.omega_step;
        }
        prev_m = m;
        prev_e = e;
        have_prev = true;
    }
    if (!(den > 0.0)) throw InvalidArgument("efficiency-weighted M1 integral is zero");
    return 2.0 * num / den * detected_cps / pump_mw;
}

/// S_0/P = R_generated / (B P). Pass B in ordinary THz for cps/(THz mW).
inline double spectral_coincidence_efficiency(double generated_per_mw, double bandwidth) {
    if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
    return generated_per_mw / bandwidth;
}

} // namespace qoct::source
