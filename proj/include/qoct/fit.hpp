#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "qoct/errors.hpp"
#include "qoct/interferogram.hpp"

namespace qoct::dsp {

/// A * exp(-(x - center)^2 / (2 std^2)) fitted by least squares.
struct GaussianPeakFit {
    double center = 0.0;
    double std = 0.0;
    double amplitude = 0.0;
    double residual_rms = 0.0;
    int iterations = 0;

    double fwhm() const noexcept { return std::sqrt(8.0 * std::log(2.0)) * std; }
    double relative_residual() const noexcept { return amplitude != 0.0 ? residual_rms / std::abs(amplitude) : INFINITY; }
};

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-13; // relative parameter step that counts as converged
};

namespace detail {

inline bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::array<double, 3>& x) {
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (a[p][c] == 0.0) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return true;
}

inline double chi2(std::span<const double> x, std::span<const double> y, const std::array<double, 3>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = (x[i] - p[1]) / p[2];
        const double r = y[i] - p[0] * std::exp(-0.5 * u * u);
        s += r * r;
    }
    return s;
}

} // namespace detail

/// Levenberg-Marquardt fit of one positive Gaussian peak, started from the
/// weighted moments of the samples above 5% of the maximum.
/// Throws ConvergenceError after max_iterations.
inline GaussianPeakFit fit_gaussian(std::span<const double> x, std::span<const double> y, const FitOptions& opt = {}) {
    if (x.size() != y.size() || x.size() < 4) throw InvalidArgument("gaussian fit needs at least 4 (x, y) samples");
    const double peak = *std::max_element(y.begin(), y.end());
    if (!(peak > 0.0)) throw InvalidArgument("gaussian fit needs a positive peak");

    double w_sum = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.05 * peak) {
            w_sum += y[i];
            m1 += y[i] * x[i];
        }
    m1 /= w_sum;
    double m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.05 * peak) m2 += y[i] * (x[i] - m1) * (x[i] - m1);
    const double spacing = std::abs(x.back() - x.front()) / static_cast<double>(x.size() - 1);
    std::array<double, 3> p{peak, m1, std::max(std::sqrt(m2 / w_sum), spacing)};

    double lambda = 1e-3;
    double current = detail::chi2(x, y, p);
    int it = 0;
    bool converged = false;
    for (; it < opt.max_iterations && !converged; ++it) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - p[1];
            const double e = std::exp(-0.5 * d * d / (p[2] * p[2]));
            const std::array<double, 3> g{e, p[0] * e * d / (p[2] * p[2]), p[0] * e * d * d / (p[2] * p[2] * p[2])};
            const double r = y[i] - p[0] * e;
            for (int a = 0; a < 3; ++a) {
                jtr[a] += g[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += g[a] * g[b];
            }
        }
        // Retry with growing damping until the step lowers chi^2.
        while (true) {
            auto m = jtj;
            for (int a = 0; a < 3; ++a) m[a][a] *= 1.0 + lambda;
            std::array<double, 3> step{};
            if (!detail::solve3(m, jtr, step)) {
                converged = true; // flat direction: nothing left to improve
                break;
            }
            std::array<double, 3> trial{p[0] + step[0], p[1] + step[1], std::abs(p[2] + step[2])};
            const double next = detail::chi2(x, y, trial);
            if (next <= current) {
                double rel = 0.0;
                rel = std::max(rel, std::abs(step[0]) / std::max(std::abs(p[0]), 1e-300));
                rel = std::max(rel, std::abs(step[1]) / p[2]);
                rel = std::max(rel, std::abs(step[2]) / p[2]);
                p = trial;
                converged = rel < opt.tolerance || current - next <= 1e-15 * current;
                current = next;
                lambda = std::max(lambda * 0.1, 1e-12);
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e12) {
                converged = true; // no descent direction left at working precision
                break;
            }
        }
    }
    if (!converged)
        throw ConvergenceError("gaussian fit did not converge in " + std::to_string(opt.max_iterations) + " iterations",
                               p[2], std::sqrt(current / static_cast<double>(x.size())));

    GaussianPeakFit f;
    f.amplitude = p[0];
    f.center = p[1];
    f.std = p[2];
    f.residual_rms = std::sqrt(current / static_cast<double>(x.size()));
    f.iterations = it;
    return f;
}

/// Fit over the delay axis of an interferogram.
inline GaussianPeakFit fit_gaussian(const Interferogram& ig, const FitOptions& opt = {}) {
    ig.validate();
    std::vector<double> x(ig.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = ig.tau_at(i);
    return fit_gaussian(x, ig.values, opt);
}

/// True when the residual is small against the amplitude; a two-lobe or
/// otherwise non-Gaussian peak fails this.
inline bool gaussian_shape(const GaussianPeakFit& fit, double max_relative_residual = 0.02) {
    return fit.relative_residual() < max_relative_residual;
}

} // namespace qoct::dsp
