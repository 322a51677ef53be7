#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qoct/errors.hpp"

namespace qoct {

/// Coincidence-rate samples on a uniform delay grid.
struct Interferogram {
    double tau_start = 0.0; // fs
    double tau_step = 1.0;  // fs
    std::vector<double> values;
    std::string label;

    std::size_t size() const noexcept { return values.size(); }
    double tau_at(std::size_t i) const noexcept { return tau_start + tau_step * static_cast<double>(i); }

    void validate() const {
        if (values.empty()) throw InvalidArgument("interferogram '" + label + "' is empty");
        if (!(tau_step > 0.0)) throw InvalidArgument("interferogram '" + label + "' has non-positive tau step");
        for (double v : values)
            if (!std::isfinite(v)) throw InvalidArgument("interferogram '" + label + "' has non-finite samples");
    }

    /// Builds an interferogram from explicit delays, rejecting non-uniform spacing
    /// (relative deviation of any step above 1e-6).
    static Interferogram from_samples(std::span<const double> taus, std::span<const double> vals, std::string label = {}) {
        if (taus.size() != vals.size()) throw InvalidArgument("delay and value columns differ in length");
        if (taus.size() < 2) throw InvalidArgument("need at least two samples to define a delay grid");
        const double step = (taus.back() - taus.front()) / static_cast<double>(taus.size() - 1);
        if (!(step > 0.0)) throw GridMismatch("delays must be strictly increasing");
        for (std::size_t i = 1; i < taus.size(); ++i) {
            const double expected = taus.front() + step * static_cast<double>(i);
            if (std::abs(taus[i] - expected) > 1e-6 * step) throw GridMismatch("delay grid is not uniform");
        }
        Interferogram ig{taus.front(), step, std::vector<double>(vals.begin(), vals.end()), std::move(label)};
        ig.validate();
        return ig;
    }
};

/// Uniform delay grid.
struct TauGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double at(std::size_t i) const noexcept { return start + step * static_cast<double>(i); }

    static TauGrid centered(double center, double half_width, double step) {
        if (!(step > 0.0)) throw InvalidArgument("tau grid step must be > 0");
        if (!(half_width > 0.0)) throw InvalidArgument("tau grid half width must be > 0");
        const auto half = static_cast<std::size_t>(std::ceil(half_width / step));
        return {center - step * static_cast<double>(half), step, 2 * half + 1};
    }
};

/// The four interferogram terms at one delay; 16 M = constant + hom - single_photon + pump.
struct TermValues {
    double constant = 0.0;      // M_c
    double hom = 0.0;           // M_0, Hong-Ou-Mandel peak
    double single_photon = 0.0; // M_1
    double pump = 0.0;          // M_2

    double total() const noexcept { return (constant + hom - single_photon + pump) / 16.0; }
};

enum class Term { constant, hom, single_photon, pump, total };

inline double select(const TermValues& t, Term which) noexcept {
    switch (which) {
    case Term::constant: return t.constant;
    case Term::hom: return t.hom;
    case Term::single_photon: return t.single_photon;
    case Term::pump: return t.pump;
    case Term::total: return t.total();
    }
    return 0.0;
}

inline const char* term_name(Term which) noexcept {
    switch (which) {
    case Term::constant: return "Mc";
    case Term::hom: return "M0";
    case Term::single_photon: return "M1";
    case Term::pump: return "M2";
    case Term::total: return "M";
    }
    return "?";
}

/// Term-resolved samples over a grid.
struct TermSeries {
    TauGrid grid;
    std::vector<TermValues> values;

    Interferogram extract(Term which, std::string label = {}) const {
        Interferogram ig{grid.start, grid.step, {}, label.empty() ? term_name(which) : std::move(label)};
        ig.values.reserve(values.size());
        for (const auto& v : values) ig.values.push_back(select(v, which));
        return ig;
    }
    Interferogram total(std::string label = "M") const { return extract(Term::total, std::move(label)); }
};

} // namespace qoct
