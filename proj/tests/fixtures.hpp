#pragma once

#include <random>

#include "qoct/samples.hpp"
#include "qoct/spectra.hpp"
#include "qoct/units.hpp"

namespace fixtures {

// 405 nm pump, degenerate signal/idler at 810 nm.
inline const double omega0 = qoct::units::wavelength_nm_to_rad_per_fs(810.0);

inline qoct::BiphotonSpectrum degenerate(double pump_std = 0.001, double pm_std = 0.2) {
    return {omega0, pump_std, pm_std, 0.0};
}

inline qoct::BiphotonSpectrum detuned(double detuning, double pump_std = 0.001, double pm_std = 0.2) {
    return {omega0, pump_std, pm_std, detuning};
}

inline qoct::SampleResponse mirror(double reflectivity, double group_delay = 0.0, double dispersion = 0.0) {
    return qoct::SampleResponse::from_reflectivity(reflectivity, group_delay, dispersion, omega0);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

} // namespace fixtures
