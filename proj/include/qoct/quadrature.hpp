#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "qoct/errors.hpp"

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature for vector-valued integrands.
///
/// All components share one panel tree: the panel with the largest component
/// error is bisected until every component meets max(rel_tol*|I_k|, abs_tol).
/// Panel order and summation order depend only on the inputs, so repeated calls
/// are bitwise reproducible.
namespace qoct::quad {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 200000;
};

template <std::size_t N>
struct Result {
    Vec<N> value{};
    Vec<N> error{};
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a = 0.0;
    double b = 0.0;
    Vec<N> value{};
    Vec<N> error{};
    double worst = 0.0;
};

// QUADPACK qk15 error heuristic, applied per component.
inline double qk_error(double diff, double resabs, double resasc) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    double err = std::abs(diff);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return err;
}

template <std::size_t N, class F>
Panel<N> gauss_kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<Vec<N>, 15> fv;
    fv[7] = f(center);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }

    Panel<N> p;
    p.a = a;
    p.b = b;
    for (std::size_t k = 0; k < N; ++k) {
        double resk = wgk[7] * fv[7][k];
        double resg = wg[3] * fv[7][k];
        double resabs = wgk[7] * std::abs(fv[7][k]);
        for (std::size_t j = 0; j < 7; ++j) {
            const double sum = fv[j][k] + fv[14 - j][k];
            resk += wgk[j] * sum;
            resabs += wgk[j] * (std::abs(fv[j][k]) + std::abs(fv[14 - j][k]));
            if (j % 2 == 1) resg += wg[j / 2] * sum;
        }
        const double mean = 0.5 * resk;
        double resasc = wgk[7] * std::abs(fv[7][k] - mean);
        for (std::size_t j = 0; j < 7; ++j)
            resasc += wgk[j] * (std::abs(fv[j][k] - mean) + std::abs(fv[14 - j][k] - mean));

        p.value[k] = resk * half;
        p.error[k] = qk_error((resk - resg) * half, resabs * abs_half, resasc * abs_half);
        p.worst = std::max(p.worst, p.error[k]);
    }
    return p;
}

template <std::size_t N>
struct WorstFirst {
    const std::vector<Panel<N>>* panels;
    bool operator()(std::size_t lhs, std::size_t rhs) const {
        const auto& l = (*panels)[lhs];
        const auto& r = (*panels)[rhs];
        if (l.worst != r.worst) return l.worst < r.worst;
        return lhs > rhs;
    }
};

} // namespace detail

/// Integrates f over [a, b], starting from `initial_panels` equal panels.
///
/// F must be callable as `Vec<N>(double)`. Returns the best estimate with
/// `converged == false` when max_panels is exhausted; callers decide whether
/// that is an error.
template <std::size_t N, class F>
Result<N> integrate(F&& f, double a, double b, int initial_panels = 1, const Options& opt = {}) {
    Result<N> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    initial_panels = std::max(1, initial_panels);

    std::vector<detail::Panel<N>> panels;
    panels.reserve(static_cast<std::size_t>(initial_panels) * 2 + 16);
    const double width = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + width * i;
        const double hi = (i + 1 == initial_panels) ? b : a + width * (i + 1);
        panels.push_back(detail::gauss_kronrod15<N>(f, lo, hi));
    }
    out.evaluations = 15 * initial_panels;

    auto totals = [&panels](Vec<N>& value, Vec<N>& error) {
        value.fill(0.0);
        error.fill(0.0);
        for (const auto& p : panels) {
            for (std::size_t k = 0; k < N; ++k) {
                value[k] += p.value[k];
                error[k] += p.error[k];
            }
        }
    };
    auto satisfied = [&opt](const Vec<N>& value, const Vec<N>& error) {
        for (std::size_t k = 0; k < N; ++k)
            if (error[k] > std::max(opt.rel_tol * std::abs(value[k]), opt.abs_tol)) return false;
        return true;
    };

    Vec<N> value;
    Vec<N> error;
    totals(value, error);
    if (satisfied(value, error)) {
        out.value = value;
        out.error = error;
        out.converged = true;
        return out;
    }

    detail::WorstFirst<N> cmp{&panels};
    std::priority_queue<std::size_t, std::vector<std::size_t>, detail::WorstFirst<N>> queue(cmp);
    for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

    bool converged = false;
    while (static_cast<int>(panels.size()) < opt.max_panels) {
        const std::size_t worst = queue.top();
        queue.pop();
        const double lo = panels[worst].a;
        const double hi = panels[worst].b;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > std::min(lo, hi) && mid < std::max(lo, hi))) break; // panel at floating-point resolution

        auto left = detail::gauss_kronrod15<N>(f, lo, mid);
        auto right = detail::gauss_kronrod15<N>(f, mid, hi);
        out.evaluations += 30;
        for (std::size_t k = 0; k < N; ++k) {
            value[k] += left.value[k] + right.value[k] - panels[worst].value[k];
            error[k] += left.error[k] + right.error[k] - panels[worst].error[k];
        }
        panels[worst] = left;
        panels.push_back(right);
        queue.push(worst);
        queue.push(panels.size() - 1);

        if (satisfied(value, error)) {
            // Incremental sums drift; confirm against a fresh summation.
            totals(value, error);
            if (satisfied(value, error)) {
                converged = true;
                break;
            }
        }
    }
    totals(value, error);
    out.value = value;
    out.error = error;
    out.converged = converged || satisfied(value, error);
    return out;
}

/// Scalar convenience wrapper.
template <class F>
Result<1> integrate_scalar(F&& f, double a, double b, int initial_panels = 1, const Options& opt = {}) {
    auto wrapped = [&f](double x) { return Vec<1>{f(x)}; };
    return integrate<1>(wrapped, a, b, initial_panels, opt);
}

} // namespace qoct::quad
