#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <string>
#include <vector>

#include "qoct/errors.hpp"
#include "qoct/interferogram.hpp"
#include "qoct/parallel.hpp"
#include "qoct/quadrature.hpp"
#include "qoct/samples.hpp"
#include "qoct/spectra.hpp"

/// Brute-force evaluation of the coincidence interferogram by 2D quadrature of
/// the spectral density against the Michelson kernels. Works for any sample
/// response, and serves as the reference the closed forms are checked against.
namespace qoct::engine {

template <class R>
concept ResponseFunction = requires(const R& h, double omega) {
    { h(omega) } -> std::convertible_to<std::complex<double>>;
};

/// Kernels K_c, K_0, K_1, K_2 at frequency offsets nu1, nu2 from omega0.
/// Their signed sum K_c + K_0 - K_1 + K_2 equals
/// |[H(w0+nu1) - e^{i(w0+nu1)tau}][H(w0+nu2) - e^{i(w0+nu2)tau}]|^2.
template <ResponseFunction R>
TermValues kernels(double nu1, double nu2, double tau, const R& h, double omega0) {
    const std::complex<double> h1 = h(omega0 + nu1);
    const std::complex<double> h2 = h(omega0 + nu2);
    const std::complex<double> a1 = std::polar(1.0, -nu1 * tau) * h1;
    const std::complex<double> a2 = std::polar(1.0, -nu2 * tau) * h2;
    const std::complex<double> carrier = std::polar(1.0, -omega0 * tau);
    const double p1 = std::norm(h1) + 1.0;
    const double p2 = std::norm(h2) + 1.0;

    TermValues k;
    k.constant = p1 * p2;
    k.hom = 2.0 * std::real(a1 * std::conj(a2));
    k.single_photon = 2.0 * std::real(carrier * a1) * p2 + 2.0 * std::real(carrier * a2) * p1;
    k.pump = 2.0 * std::real(carrier * carrier * a1 * a2);
    return k;
}

template <ResponseFunction R>
double kernel(Term kind, double nu1, double nu2, double tau, const R& h, double omega0) {
    return select(kernels(nu1, nu2, tau, h, omega0), kind);
}

/// Tolerances per term. `abs_tol` is in units of the spectrum's total weight,
/// so it is an absolute error bound on M_c, M_0, M_1 and M_2 directly.
struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_panels = 400000;
    int threads = 1;
};

/// Group delay of H sampled across the frequency support; bounds the phase
/// rate of every kernel so the initial panel count resolves the oscillation.
class PhaseRateProfile {
public:
    template <ResponseFunction R>
    PhaseRateProfile(const R& h, double omega0, double nu_max) {
        constexpr int nodes = 65;
        constexpr double step = 1e-6;
        delays_.reserve(nodes);
        for (int j = 0; j < nodes; ++j) {
            const double nu = -nu_max + 2.0 * nu_max * j / (nodes - 1);
            const std::complex<double> up = h(omega0 + nu + step);
            const std::complex<double> down = h(omega0 + nu - step);
            delays_.push_back(std::arg(up * std::conj(down)) / (2.0 * step));
        }
    }

    /// Largest |d(phase)/d(nu)| of the kernel integrands at delay tau, in fs.
    double max_rate(double tau) const {
        double rate = 0.0;
        for (double d : delays_) rate = std::max(rate, std::abs(d - tau));
        return rate;
    }

private:
    std::vector<double> delays_;
};

namespace detail {

inline int panels_for(double width, double rate, int minimum) {
    const double periods = width * rate / (2.0 * std::numbers::pi);
    return std::max(minimum, static_cast<int>(std::ceil(periods)));
}

template <ResponseFunction R>
TermValues integrate_terms(double tau, const BiphotonSpectrum& spec, const R& h, const PhaseRateProfile& profile,
                           const Options& opt) {
    const SpectralSupport sup = support(spec);
    const double rate = profile.max_rate(tau);
    const int outer_panels = panels_for(2.0 * sup.sum_half_width, rate, 4);
    const int inner_panels = panels_for(sup.difference_hi - sup.difference_lo, rate, 2);

    quad::Options outer_opt{opt.rel_tol, opt.abs_tol, opt.max_panels};

    const double inv_2var_pump = 1.0 / (2.0 * spec.pump_std * spec.pump_std);
    const double inv_2var_pm = 1.0 / (2.0 * spec.phase_matching_std * spec.phase_matching_std);
    // Jacobian 1/2 of (w1, w2) -> (sum, difference), times 2 for the folded difference axis.
    const double norm = spec.degenerate() ? 1.0 / (std::numbers::pi * spec.pump_std * spec.phase_matching_std)
                                          : 1.0 / (2.0 * std::numbers::pi * spec.pump_std * spec.phase_matching_std);
    const double lobe = 2.0 * spec.detuning;
    const bool degenerate = spec.degenerate();
    // Upper bound on the difference-axis integral of the weight, per unit pump weight.
    const double lobe_mass = std::sqrt(2.0 * std::numbers::pi) * spec.phase_matching_std;

    bool inner_converged = true;
    double inner_worst = 0.0;
    auto outer = [&](double s) -> quad::Vec<4> {
        const double pump_weight = norm * std::exp(-s * s * inv_2var_pump);
        if (pump_weight == 0.0) return {0.0, 0.0, 0.0, 0.0};
        // Inner errors are budgeted against the local weight so their sum stays below abs_tol.
        const quad::Options inner_opt{0.1 * opt.rel_tol, 0.1 * opt.abs_tol * pump_weight * lobe_mass, opt.max_panels};
        auto inner = [&](double d) -> quad::Vec<4> {
            double pm;
            if (degenerate) {
                pm = std::exp(-d * d * inv_2var_pm);
            } else {
                const double dm = d - lobe;
                const double dp = d + lobe;
                pm = std::exp(-dm * dm * inv_2var_pm) + std::exp(-dp * dp * inv_2var_pm);
            }
            const double w = pump_weight * pm;
            if (w == 0.0) return {0.0, 0.0, 0.0, 0.0};
            const TermValues k = kernels(0.5 * (s + d), 0.5 * (s - d), tau, h, spec.omega0);
            return {w * k.constant, w * k.hom, w * k.single_photon, w * k.pump};
        };
        auto r = quad::integrate<4>(inner, sup.difference_lo, sup.difference_hi, inner_panels, inner_opt);
        if (!r.converged) {
            inner_converged = false;
            inner_worst = std::max({inner_worst, r.error[0], r.error[1], r.error[2], r.error[3]});
        }
        return r.value;
    };

    auto r = quad::integrate<4>(outer, -sup.sum_half_width, sup.sum_half_width, outer_panels, outer_opt);
    if (!r.converged || !inner_converged) {
        const double err = std::max({r.error[0], r.error[1], r.error[2], r.error[3], inner_worst});
        throw ConvergenceError("oscillatory kernel integral missed its tolerance at tau = " + std::to_string(tau) +
                                   " fs (achieved error " + std::to_string(err) + ")",
                               r.value[1], err);
    }
    return {r.value[0], r.value[1], r.value[2], r.value[3]};
}

inline double nu_max(const BiphotonSpectrum& spec) {
    const SpectralSupport sup = support(spec);
    return 0.5 * (sup.sum_half_width + sup.difference_hi);
}

} // namespace detail

/// M_c, M_0(tau), M_1(tau), M_2(tau) at one delay.
template <ResponseFunction R>
TermValues terms(double tau, const BiphotonSpectrum& spec, const R& h, const Options& opt = {}) {
    spec.validate();
    const PhaseRateProfile profile(h, spec.omega0, detail::nu_max(spec));
    return detail::integrate_terms(tau, spec, h, profile, opt);
}

template <ResponseFunction R>
double term(Term kind, double tau, const BiphotonSpectrum& spec, const R& h, const Options& opt = {}) {
    return select(terms(tau, spec, h, opt), kind);
}

/// Coarsest delay step that still puts 8 samples on each pump-interference
/// fringe (period pi/omega0).
inline double max_tau_step(const BiphotonSpectrum& spec) { return std::numbers::pi / (8.0 * spec.omega0); }

/// Grid centered on the sample delay; half width 6 * max(2/Delta, |kappa| Delta)
/// plus the lobe offset 2|kappa| Omega, step pi/(8 omega0).
inline TauGrid default_tau_grid(const BiphotonSpectrum& spec, const SampleResponse& sample) {
    spec.validate();
    const double dk = std::abs(sample.dispersion);
    const double half = 6.0 * std::max(2.0 / spec.phase_matching_std, dk * spec.phase_matching_std) +
                        2.0 * dk * spec.detuning;
    return TauGrid::centered(sample.group_delay, half, max_tau_step(spec));
}

inline void check_nyquist(const TauGrid& grid, const BiphotonSpectrum& spec) {
    if (grid.count == 0) throw InvalidArgument("tau grid is empty");
    const double limit = max_tau_step(spec);
    if (grid.step > limit * (1.0 + 1e-12))
        throw NyquistViolation("tau step " + std::to_string(grid.step) + " fs exceeds pi/(8 omega0) = " +
                               std::to_string(limit) + " fs");
}

/// Term-resolved interferogram over a grid. Grid points are independent, so the
/// result is identical for any thread count.
template <ResponseFunction R>
TermSeries evaluate_terms(const TauGrid& grid, const BiphotonSpectrum& spec, const R& h, const Options& opt = {}) {
    spec.validate();
    check_nyquist(grid, spec);
    const PhaseRateProfile profile(h, spec.omega0, detail::nu_max(spec));
    TermSeries out{grid, std::vector<TermValues>(grid.count)};
    parallel_for(grid.count, opt.threads,
                 [&](std::size_t i) { out.values[i] = detail::integrate_terms(grid.at(i), spec, h, profile, opt); });
    return out;
}

/// M(tau) = [M_c + M_0 - M_1 + M_2] / 16 over a grid.
template <ResponseFunction R>
Interferogram interferogram(const TauGrid& grid, const BiphotonSpectrum& spec, const R& h, const Options& opt = {}) {
    return evaluate_terms(grid, spec, h, opt).total("oracle");
}

} // namespace qoct::engine
