#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qoct/efficiency.hpp"
#include "qoct/errors.hpp"
#include "qoct/fft.hpp"
#include "qoct/interferogram.hpp"
#include "qoct/units.hpp"

/// Interferogram processing: spectra, five-zone efficiency calibration, term
/// extraction and envelopes.
namespace qoct::dsp {

using cd = std::complex<double>;

/// DFT of an interferogram on a uniform, centered angular-frequency grid
/// omega_k = omega_start + k * omega_step (negative frequencies first).
struct ComplexSpectrum {
    double omega_start = 0.0; // rad/fs
    double omega_step = 0.0;  // rad/fs
    std::vector<cd> values;
    std::string label;
    int zero_pad_factor = 1;
    std::size_t source_size = 0; // samples in the source interferogram
    double tau_start = 0.0;
    double tau_step = 0.0;

    std::size_t size() const noexcept { return values.size(); }
    double omega_at(std::size_t k) const noexcept { return omega_start + omega_step * static_cast<double>(k); }

    bool same_grid(const ComplexSpectrum& o) const noexcept {
        return values.size() == o.values.size() && source_size == o.source_size &&
               std::abs(omega_step - o.omega_step) <= 1e-12 * omega_step &&
               std::abs(tau_start - o.tau_start) <= 1e-9 * std::max(1.0, std::abs(tau_step));
    }

    /// Index of the bin closest to omega.
    std::size_t index_of(double omega) const {
        const double k = std::round((omega - omega_start) / omega_step);
        return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(values.size() - 1)));
    }
};

enum class Window { none, raised_cosine };

struct FftOptions {
    int zero_pad_factor = 4;
    Window window = Window::none;
};

namespace detail {

// Centered position k holds standard DFT bin (k - N/2) mod N.
inline std::size_t standard_index(std::size_t k, std::size_t n) { return (k + n - n / 2) % n; }

inline std::vector<cd> to_centered(const std::vector<cd>& standard) {
    const std::size_t n = standard.size();
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = standard[standard_index(k, n)];
    return out;
}

inline std::vector<cd> to_standard(const std::vector<cd>& centered) {
    const std::size_t n = centered.size();
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) out[standard_index(k, n)] = centered[k];
    return out;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

} // namespace detail

/// Mean-removed, optionally windowed and zero-padded DFT.
inline ComplexSpectrum fft_spectrum(const Interferogram& ig, const FftOptions& opt = {}) {
    ig.validate();
    if (ig.size() < 16) throw InvalidArgument("interferogram '" + ig.label + "' needs at least 16 samples for an FFT");
    if (opt.zero_pad_factor < 1) throw InvalidArgument("zero_pad_factor must be >= 1");

    const std::size_t n = ig.size();
    const std::size_t padded = n * static_cast<std::size_t>(opt.zero_pad_factor);
    const double m = detail::mean(ig.values);
    std::vector<cd> x(padded, cd{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        double v = ig.values[i] - m;
        if (opt.window == Window::raised_cosine)
            v *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
        x[i] = v;
    }

    ComplexSpectrum s;
    s.omega_step = 2.0 * std::numbers::pi / (static_cast<double>(padded) * ig.tau_step);
    s.omega_start = -static_cast<double>(padded / 2) * s.omega_step;
    s.values = detail::to_centered(fft::forward(x));
    s.label = ig.label;
    s.zero_pad_factor = opt.zero_pad_factor;
    s.source_size = n;
    s.tau_start = ig.tau_start;
    s.tau_step = ig.tau_step;
    return s;
}

enum class Baseline { none, edges };

/// Inverse DFT back onto the source delay grid (real part).
///
/// Mean removal in fft_spectrum discards the DC bin, which carries part of a
/// non-oscillating term. With Baseline::edges the mean of the outer 10% of
/// samples on each side is subtracted so the tails return to zero.
inline Interferogram extract_term(const ComplexSpectrum& combined, Baseline baseline = Baseline::edges) {
    if (combined.values.empty() || combined.source_size == 0 || combined.source_size > combined.values.size())
        throw InvalidArgument("spectrum '" + combined.label + "' is not tied to a source interferogram");
    const auto x = fft::inverse(detail::to_standard(combined.values));
    Interferogram ig{combined.tau_start, combined.tau_step, std::vector<double>(combined.source_size), combined.label};
    for (std::size_t i = 0; i < combined.source_size; ++i) ig.values[i] = x[i].real();

    if (baseline == Baseline::edges) {
        const std::size_t n = ig.size();
        const std::size_t edge = std::max<std::size_t>(1, n / 10);
        double sum = 0.0;
        for (std::size_t i = 0; i < edge; ++i) sum += ig.values[i] + ig.values[n - 1 - i];
        const double offset = sum / static_cast<double>(2 * edge);
        for (double& v : ig.values) v -= offset;
    }
    return ig;
}

/// Magnitude of the analytic signal of the mean-removed input.
inline Interferogram envelope(const Interferogram& ig) {
    ig.validate();
    const std::size_t n = ig.size();
    const std::size_t padded = 2 * n;
    const double m = detail::mean(ig.values);
    std::vector<cd> x(padded, cd{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) x[i] = ig.values[i] - m;
    auto X = fft::forward(x);
    // Keep DC and Nyquist, double positive frequencies, drop negative ones.
    for (std::size_t k = 1; k < padded; ++k) {
        if (k < padded / 2) X[k] *= 2.0;
        else if (k > padded / 2) X[k] = 0.0;
    }
    const auto z = fft::inverse(X);
    Interferogram out{ig.tau_start, ig.tau_step, std::vector<double>(n), ig.label.empty() ? "envelope" : ig.label + "_envelope"};
    for (std::size_t i = 0; i < n; ++i) out.values[i] = std::abs(z[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Zone calibration

/// Pump frequency, dichroic split and the right edge of zone 5, all in rad/fs.
struct ZoneConfig {
    double omega_p = 0.0;
    double delta_c = 0.0;     // omega_p/2 - omega_c
    double zone5_right = 0.0; // default 3 omega_p / 4

    static ZoneConfig make(double omega_p, double delta_c, std::optional<double> zone5_right = std::nullopt) {
        ZoneConfig c{omega_p, delta_c, zone5_right.value_or(0.75 * omega_p)};
        c.validate();
        return c;
    }

    /// From the pump wavelength and the dichroic cut-on wavelength lambda_c.
    static ZoneConfig from_wavelengths(double pump_nm, double cut_nm, std::optional<double> zone5_right = std::nullopt) {
        const double wp = units::wavelength_nm_to_rad_per_fs(pump_nm);
        return make(wp, 0.5 * wp - units::wavelength_nm_to_rad_per_fs(cut_nm), zone5_right);
    }

    void validate() const {
        const double wp = omega_p;
        const bool ordered = 0.0 < 2.0 * delta_c && 2.0 * delta_c < wp / 3.0 && wp / 3.0 < wp / 2.0 - delta_c &&
                             wp / 2.0 - delta_c < wp / 2.0 + delta_c && wp / 2.0 + delta_c < zone5_right &&
                             zone5_right < wp;
        if (!(wp > 0.0) || !ordered)
            throw InvalidArgument("zone configuration violates 0 < 2 delta_c < omega_p/3 < omega_p/2 - delta_c < "
                                  "omega_p/2 + delta_c < zone5_right < omega_p");
    }
};

enum class Channel { vis_vis, ir_vis };

inline const char* channel_name(Channel c) { return c == Channel::vis_vis ? "VIS-VIS" : "IR-VIS"; }

/// One row of the calibration table: |omega| in [lo, hi).
struct Zone {
    int index = 0;
    double lo = 0.0;
    double hi = 0.0;
    Term term = Term::hom;
    Channel channel = Channel::vis_vis;
    double omega_p = 0.0;

    bool contains(double omega) const noexcept { return omega >= lo && omega < hi; }

    /// Efficiency product the measured spectrum is divided by.
    double correction(double omega, const EfficiencyCurve& vis, const EfficiencyCurve& ir) const {
        const double wp = omega_p;
        switch (index) {
        case 1: return 0.5 * vis(0.5 * (wp + omega)) * vis(0.5 * (wp - omega));
        case 2: return vis(0.5 * (wp + omega)) * ir(0.5 * (wp - omega));
        case 3: return ir(omega) * vis(wp - omega);
        case 4: return 0.5 * vis(omega) * vis(wp - omega);
        case 5: return vis(omega) * ir(wp - omega);
        }
        throw InvalidArgument("zone index must be 1..5");
    }
};

inline std::array<Zone, 5> zones(const ZoneConfig& cfg) {
    cfg.validate();
    const double wp = cfg.omega_p;
    const double dc = cfg.delta_c;
    return {{
        {1, 0.0, 2.0 * dc, Term::hom, Channel::vis_vis, wp},
        {2, 2.0 * dc, wp / 3.0, Term::hom, Channel::ir_vis, wp},
        {3, wp / 3.0, wp / 2.0 - dc, Term::single_photon, Channel::ir_vis, wp},
        {4, wp / 2.0 - dc, wp / 2.0 + dc, Term::single_photon, Channel::vis_vis, wp},
        {5, wp / 2.0 + dc, cfg.zone5_right, Term::single_photon, Channel::ir_vis, wp},
    }};
}

inline const Zone* zone_of(const std::array<Zone, 5>& zs, double omega) {
    const double a = std::abs(omega);
    for (const auto& z : zs)
        if (z.contains(a)) return &z;
    return nullptr;
}

inline void require_extractable(Term term) {
    if (term != Term::hom && term != Term::single_photon)
        throw InvalidArgument(std::string("only M0 and M1 are zone-calibrated, not ") + term_name(term));
}

/// Divides each bin of the term's zones by its efficiency product, taking
/// VIS-VIS bins from `vis_vis` and IR-VIS bins from `ir_vis`. Other bins are zeroed.
/// Zones are applied on |omega| so the result stays Hermitian.
inline ComplexSpectrum correct_and_combine(const ComplexSpectrum& vis_vis, const ComplexSpectrum& ir_vis,
                                           const EfficiencyCurve& eta_vis, const EfficiencyCurve& eta_ir,
                                           const ZoneConfig& cfg, Term term) {
    require_extractable(term);
    if (!vis_vis.same_grid(ir_vis)) throw GridMismatch("VIS-VIS and IR-VIS spectra are on different grids");
    const auto zs = zones(cfg);
    ComplexSpectrum out = vis_vis;
    out.label = term_name(term);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double w = out.omega_at(k);
        const Zone* z = zone_of(zs, w);
        if (!z || z->term != term) {
            out.values[k] = 0.0;
            continue;
        }
        const double c = z->correction(std::abs(w), eta_vis, eta_ir);
        if (!(c > 0.0))
            throw EfficiencyOutOfRange("zero efficiency product in zone " + std::to_string(z->index) + " at " +
                                       std::to_string(std::abs(w)) + " rad/fs");
        out.values[k] = (z->channel == Channel::vis_vis ? vis_vis.values[k] : ir_vis.values[k]) / c;
    }
    return out;
}

/// Forward model of a detection channel: the spectrum of a true interferogram is
/// multiplied by the efficiency product on that channel's zones and zeroed
/// elsewhere; the input mean is added back as the constant background.
inline Interferogram degrade(const Interferogram& truth, const EfficiencyCurve& eta_vis, const EfficiencyCurve& eta_ir,
                             const ZoneConfig& cfg, Channel channel) {
    const auto zs = zones(cfg);
    ComplexSpectrum s = fft_spectrum(truth, {2, Window::none});
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double w = s.omega_at(k);
        const Zone* z = zone_of(zs, w);
        s.values[k] = (z && z->channel == channel) ? s.values[k] * z->correction(std::abs(w), eta_vis, eta_ir) : 0.0;
    }
    Interferogram out = extract_term(s, Baseline::none);
    const double m = detail::mean(truth.values);
    for (double& v : out.values) v += m;
    out.label = channel_name(channel);
    return out;
}

/// Boundaries of the zones that feed a term, in increasing order.
inline std::vector<double> zone_boundaries(const ZoneConfig& cfg, Term term) {
    require_extractable(term);
    std::vector<double> b;
    for (const auto& z : zones(cfg)) {
        if (z.term != term) continue;
        if (b.empty()) b.push_back(z.lo);
        b.push_back(z.hi);
    }
    return b;
}

} // namespace qoct::dsp
