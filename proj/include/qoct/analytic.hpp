#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qoct/errors.hpp"
#include "qoct/faddeeva.hpp"
#include "qoct/interferogram.hpp"
#include "qoct/samples.hpp"
#include "qoct/spectra.hpp"

/// Closed-form interferogram terms for the double-Gaussian spectrum and the
/// single-layer sample, in four regimes: degenerate or detuned SPDC, with or
/// without quadratic sample dispersion. Dispersive regimes come in an exact
/// form and an asymptotic form valid for a narrowband pump, negligible
/// dispersion broadening of M_0 and strong dispersion for M_1.
namespace qoct::analytic {

enum class Regime {
    degenerate,                         // no dispersion
    detuned,                            // no dispersion
    degenerate_dispersive_exact,
    degenerate_dispersive_simplified,
    detuned_dispersive_exact,
    detuned_dispersive_simplified,
};

inline constexpr std::string_view regime_name(Regime r) {
    switch (r) {
    case Regime::degenerate: return "deg_nodisp";
    case Regime::detuned: return "nondeg_nodisp";
    case Regime::degenerate_dispersive_exact: return "deg_disp_exact";
    case Regime::degenerate_dispersive_simplified: return "deg_disp_simplified";
    case Regime::detuned_dispersive_exact: return "nondeg_disp_exact";
    case Regime::detuned_dispersive_simplified: return "nondeg_disp_simplified";
    }
    return "?";
}

inline Regime parse_regime(std::string_view name) {
    for (Regime r : {Regime::degenerate, Regime::detuned, Regime::degenerate_dispersive_exact,
                     Regime::degenerate_dispersive_simplified, Regime::detuned_dispersive_exact,
                     Regime::detuned_dispersive_simplified})
        if (regime_name(r) == name) return r;
    throw InvalidArgument("unknown regime '" + std::string(name) + "'");
}

constexpr bool is_degenerate(Regime r) {
    return r == Regime::degenerate || r == Regime::degenerate_dispersive_exact ||
           r == Regime::degenerate_dispersive_simplified;
}
constexpr bool is_dispersive(Regime r) { return r != Regime::degenerate && r != Regime::detuned; }
constexpr bool is_simplified(Regime r) {
    return r == Regime::degenerate_dispersive_simplified || r == Regime::detuned_dispersive_simplified;
}

/// Which transcription of the dispersive closed forms to evaluate.
///
/// `corrected` agrees with the kernel integrals (and with the dispersion-free
/// forms at kappa = 0). `published` reproduces the forms exactly as printed:
/// negative M_1 prefactor, the "4 + 2 erf(...)" bracket and the detuning
/// factor exp(-Delta^2 kappa^2 Omega^2 / (2 Delta^4 kappa^2 + 2)) in M_2, and
/// R^2 in the simplified detuned M_2.
enum class Transcription { corrected, published };

/// Dimensionless regime indicators.
struct RegimeGuards {
    double cancellation = 0.0; // (delta Delta kappa)^2, small for dispersion cancellation
    double narrowband = 0.0;   // delta / Delta
    double significance = 0.0; // kappa Delta^2, large when dispersion matters for M_1
};

struct GuardThresholds {
    double cancellation = 0.01;
    double narrowband = 0.01;
    double significance = 10.0;
};

inline RegimeGuards regime_guards(const BiphotonSpectrum& spec, const SampleResponse& sample) {
    const double pdk = spec.pump_std * spec.phase_matching_std * sample.dispersion;
    return {pdk * pdk, spec.pump_std / spec.phase_matching_std,
            sample.dispersion * spec.phase_matching_std * spec.phase_matching_std};
}

/// Human-readable reasons why a simplified form is out of its regime (empty when it holds
/// or the regime is not simplified).
inline std::vector<std::string> regime_warnings(Regime regime, const BiphotonSpectrum& spec,
                                                const SampleResponse& sample, const GuardThresholds& th = {}) {
    std::vector<std::string> out;
    if (!is_simplified(regime)) return out;
    const RegimeGuards g = regime_guards(spec, sample);
    if (!(g.cancellation < th.cancellation))
        out.push_back("dispersion cancellation guard (delta*Delta*kappa)^2 = " + std::to_string(g.cancellation) +
                      " is not < " + std::to_string(th.cancellation));
    if (!(g.narrowband < th.narrowband))
        out.push_back("narrowband pump guard delta/Delta = " + std::to_string(g.narrowband) + " is not < " +
                      std::to_string(th.narrowband));
    if (!(g.significance > th.significance))
        out.push_back("dispersion significance guard kappa*Delta^2 = " + std::to_string(g.significance) +
                      " is not > " + std::to_string(th.significance));
    return out;
}

/// Throws CaseMismatch when the regime does not describe (spec, sample).
inline void check_case(Regime regime, const BiphotonSpectrum& spec, const SampleResponse& sample) {
    spec.validate();
    sample.validate();
    const std::string name(regime_name(regime));
    if (is_degenerate(regime) && spec.detuning != 0.0)
        throw CaseMismatch(name + " requires zero detuning, got " + std::to_string(spec.detuning) + " rad/fs");
    if (!is_dispersive(regime) && sample.dispersion != 0.0)
        throw CaseMismatch(name + " requires a dispersion-free sample, got kappa = " +
                           std::to_string(sample.dispersion) + " fs^2");
    if (is_dispersive(regime) && sample.dispersion != 0.0 &&
        std::abs(sample.omega0 - spec.omega0) > 1e-9 * spec.omega0)
        throw CaseMismatch(name + " requires the sample expansion center to equal the spectrum omega0");
    if (is_simplified(regime) && !(sample.dispersion > 0.0))
        throw CaseMismatch(name + " requires kappa > 0");
}

namespace detail {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};

inline TermValues no_dispersion(double u, const BiphotonSpectrum& spec, const SampleResponse& s) {
    const double R = s.reflectivity();
    const double r = s.amplitude;
    const double D = spec.phase_matching_std;
    const double d = spec.pump_std;
    const double W = spec.detuning;
    const double w0 = spec.omega0;
    TermValues t;
    t.constant = (1.0 + R) * (1.0 + R);
    t.hom = 2.0 * R * std::exp(-D * D * u * u / 2.0);
    t.single_photon = 4.0 * r * (1.0 + R) * std::exp(-spec.combined_variance() * u * u / 8.0) * std::cos(w0 * u);
    t.pump = 2.0 * R * std::exp(-d * d * u * u / 2.0) * std::cos(2.0 * w0 * u);
    if (W != 0.0) {
        t.hom *= std::cos(2.0 * W * u);
        t.single_photon *= std::cos(W * u);
    }
    return t;
}

// Argument of the error function in the printed pump-interference term.
inline cd published_erf_argument(double u, double d, double D, double k, double W) {
    const double d2 = d * d;
    const double D2 = D * D;
    const cd A = (1.0 - I * d2 * k) * (D2 * k + I) / (d2 * (4.0 * D2 * k + 2.0 * I) + 2.0 * I * D2);
    return std::sqrt(A) * (2.0 * W + d2 * ((D2 * k + I) * u - 2.0 * I * k * W)) / ((d2 * k + I) * (D2 * k + I));
}

inline TermValues dispersive_exact(double u, const BiphotonSpectrum& spec, const SampleResponse& s,
                                   Transcription tr) {
    const double R = s.reflectivity();
    const double r = s.amplitude;
    const double D = spec.phase_matching_std;
    const double d = spec.pump_std;
    const double W = spec.detuning;
    const double k = s.dispersion;
    const double w0 = spec.omega0;
    const double Dp2 = spec.combined_variance();
    const double sign = tr == Transcription::corrected ? 1.0 : -1.0;

    TermValues t;
    t.constant = (1.0 + R) * (1.0 + R);

    const double q = d * d * D * D * k * k;
    t.hom = 2.0 * R / std::sqrt(1.0 + q) * std::exp(-(4.0 * d * d * k * k * W * W + D * D * u * u) / (2.0 + 2.0 * q)) *
            std::cos(2.0 * W * u / (1.0 + q));

    const double a = Dp2 * Dp2 * k * k + 4.0;
    const double half_arg = 0.5 * std::arg(cd{2.0, -Dp2 * k});
    const double chirp = Dp2 * Dp2 * k * u * u / (4.0 * a);
    if (W == 0.0) {
        t.single_photon = sign * 4.0 * std::numbers::sqrt2 * r * (R + 1.0) / std::pow(a, 0.25) *
                          std::exp(-Dp2 * u * u / (2.0 * a)) * std::cos(w0 * u - chirp - half_arg);
    } else {
        const double shift = 2.0 * k * W;
        const double beat = 4.0 * W * u / a;
        const double offset = 4.0 * k * W * W / a;
        const double lead = std::exp(-Dp2 * (u + shift) * (u + shift) / (2.0 * a)) *
                            std::cos(w0 * u + beat - chirp + offset - half_arg);
        const double trail = std::exp(-Dp2 * (u - shift) * (u - shift) / (2.0 * a)) *
                             std::cos(w0 * u - beat + offset - chirp - half_arg);
        t.single_photon = sign * 2.0 * std::numbers::sqrt2 * r * (R + 1.0) / std::pow(a, 0.25) * (lead + trail);
    }

    const double d4k2 = d * d * d * d * k * k;
    const double D4k2 = D * D * D * D * k * k;
    const cd phase = std::exp(2.0 * I * w0 * u - I * d * d * d * d * k * u * u / (2.0 * (d4k2 + 1.0)) +
                              2.0 * I * k * W * W / (D4k2 + 1.0));
    const cd root = std::sqrt((-d * d * k - I) * (D * D * k + I));
    const double detuning_decay = tr == Transcription::corrected
                                      ? -2.0 * D * D * k * k * W * W / (1.0 + D4k2)
                                      : -D * D * k * k * W * W / (2.0 * D4k2 + 2.0);
    const double envelope = R / 2.0 * std::exp(detuning_decay - d * d * u * u / (2.0 * d4k2 + 2.0));
    cd bracket = 4.0;
    if (tr == Transcription::published) bracket += 2.0 * special::erf(published_erf_argument(u, d, D, k, W));
    t.pump = envelope * std::real(phase / root * bracket);
    return t;
}

inline TermValues dispersive_simplified(double u, const BiphotonSpectrum& spec, const SampleResponse& s,
                                        Transcription tr) {
    const double R = s.reflectivity();
    const double r = s.amplitude;
    const double D = spec.phase_matching_std;
    const double d = spec.pump_std;
    const double W = spec.detuning;
    const double k = s.dispersion;
    const double w0 = spec.omega0;
    const double sign = tr == Transcription::corrected ? 1.0 : -1.0;
    constexpr double quarter_pi = std::numbers::pi / 4.0;

    TermValues t;
    t.constant = (1.0 + R) * (1.0 + R);
    t.hom = 2.0 * R * std::exp(-D * D * u * u / 2.0);
    const double carrier = std::cos(w0 * u - u * u / (4.0 * k) + quarter_pi);
    if (W == 0.0) {
        t.single_photon = sign * 8.0 * r * (R + 1.0) / (D * std::sqrt(2.0 * k)) *
                          std::exp(-u * u / (2.0 * D * D * k * k)) * carrier;
        t.pump = 2.0 * R / (D * std::sqrt(k)) * std::exp(-d * d * u * u / 2.0) *
                 std::cos(2.0 * w0 * u - d * d * d * d * k * u * u / 2.0 + quarter_pi);
    } else {
        t.hom *= std::cos(2.0 * W * u);
        const double shift = 2.0 * k * W;
        const double width2 = 2.0 * k * k * D * D;
        const double lobes = std::exp(-(u + shift) * (u + shift) / width2) + std::exp(-(u - shift) * (u - shift) / width2);
        t.single_photon = sign * 2.0 * std::numbers::sqrt2 * r * (1.0 + R) / (D * std::sqrt(k)) * lobes * carrier;
        const double scale = tr == Transcription::corrected ? R : R * R;
        t.pump = 2.0 * scale / (D * std::sqrt(k)) * std::exp(-2.0 * W * W / (D * D)) * std::exp(-d * d * u * u / 2.0) *
                 std::cos(2.0 * w0 * u + quarter_pi);
    }
    return t;
}

} // namespace detail

/// (M_c, M_0, M_1, M_2) at delay tau. Throws CaseMismatch if the regime does not
/// fit the parameters; out-of-regime simplified forms are evaluated anyway
/// (see regime_warnings).
inline TermValues terms(Regime regime, double tau, const BiphotonSpectrum& spec, const SampleResponse& sample,
                        Transcription tr = Transcription::corrected) {
    check_case(regime, spec, sample);
    const double u = sample.group_delay - tau;
    switch (regime) {
    case Regime::degenerate:
    case Regime::detuned: return detail::no_dispersion(u, spec, sample);
    case Regime::degenerate_dispersive_exact:
    case Regime::detuned_dispersive_exact: return detail::dispersive_exact(u, spec, sample, tr);
    case Regime::degenerate_dispersive_simplified:
    case Regime::detuned_dispersive_simplified: return detail::dispersive_simplified(u, spec, sample, tr);
    }
    return {};
}

inline TermSeries evaluate_terms(Regime regime, const TauGrid& grid, const BiphotonSpectrum& spec,
                                 const SampleResponse& sample, Transcription tr = Transcription::corrected) {
    check_case(regime, spec, sample);
    TermSeries out{grid, {}};
    out.values.reserve(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) out.values.push_back(terms(regime, grid.at(i), spec, sample, tr));
    return out;
}

inline Interferogram interferogram(Regime regime, const TauGrid& grid, const BiphotonSpectrum& spec,
                                   const SampleResponse& sample, Transcription tr = Transcription::corrected) {
    return evaluate_terms(regime, grid, spec, sample, tr).total(std::string(regime_name(regime)));
}

/// Predicted center and StD (rad/fs) of one peak of the interferogram spectrum.
struct SpectralPeak {
    Term term;
    double center;
    double std;
};

/// Spectral peaks of the terms. Dispersion leaves centers and widths unchanged.
inline std::vector<SpectralPeak> spectral_layout(Regime regime, const BiphotonSpectrum& spec,
                                                 const SampleResponse& sample) {
    check_case(regime, spec, sample);
    const double half_combined = 0.5 * std::sqrt(spec.combined_variance());
    const double w0 = spec.omega0;
    const double W = spec.detuning;
    std::vector<SpectralPeak> peaks;
    peaks.push_back({Term::hom, 2.0 * W, spec.phase_matching_std});
    if (W == 0.0) {
        peaks.push_back({Term::single_photon, w0, half_combined});
    } else {
        peaks.push_back({Term::single_photon, w0 - W, half_combined});
        peaks.push_back({Term::single_photon, w0 + W, half_combined});
    }
    peaks.push_back({Term::pump, 2.0 * w0, spec.pump_std});
    return peaks;
}

/// M_0 and M_1 spectra can be split at omega_p/3 only when 2*detuning + Delta < omega_p/3.
inline bool separable(const BiphotonSpectrum& spec) {
    return 2.0 * spec.detuning + spec.phase_matching_std < 2.0 * spec.omega0 / 3.0;
}

} // namespace qoct::analytic
