#pragma once

#include <cmath>
#include <numbers>

#include "qoct/errors.hpp"
#include "qoct/units.hpp"

namespace qoct::dsp {

/// Width measures of a Gaussian peak. Integral is the area of the unit-height
/// peak, sqrt(2 pi) StD.
enum class BandwidthMeasure { std, fwhm, integral };

inline double to_std(double value, BandwidthMeasure m) {
    switch (m) {
    case BandwidthMeasure::std: return value;
    case BandwidthMeasure::fwhm: return value / std::sqrt(8.0 * std::numbers::ln2);
    case BandwidthMeasure::integral: return value / std::sqrt(2.0 * std::numbers::pi);
    }
    return value;
}

inline double bandwidth_convert(double value, BandwidthMeasure from, BandwidthMeasure to) {
    if (!(value > 0.0)) throw InvalidArgument("bandwidth must be > 0");
    if (from == to) return value;
    if (from == BandwidthMeasure::fwhm && to == BandwidthMeasure::integral)
        return std::sqrt(std::numbers::pi / (4.0 * std::numbers::ln2)) * value;
    if (from == BandwidthMeasure::integral && to == BandwidthMeasure::fwhm)
        return std::sqrt(4.0 * std::numbers::ln2 / std::numbers::pi) * value;
    const double s = to_std(value, from);
    switch (to) {
    case BandwidthMeasure::std: return s;
    case BandwidthMeasure::fwhm: return std::sqrt(8.0 * std::numbers::ln2) * s;
    case BandwidthMeasure::integral: return std::sqrt(2.0 * std::numbers::pi) * s;
    }
    return s;
}

/// Removes the spectral broadening of path-length jitter, FWHM_p / 4, in quadrature.
inline double broadening_correction(double fwhm_measured, double fwhm_pump_peak) {
    const double broad = 0.25 * fwhm_pump_peak;
    if (!(fwhm_pump_peak >= 0.0)) throw InvalidArgument("pump peak FWHM must be >= 0");
    if (fwhm_measured < broad)
        throw ImaginaryResult("measured FWHM " + std::to_string(fwhm_measured) + " rad/fs is below the broadening " +
                              std::to_string(broad) + " rad/fs");
    return std::sqrt(fwhm_measured * fwhm_measured - broad * broad);
}

/// Depth resolution (um) of a spectrum with angular FWHM fwhm_omega (rad/fs).
inline double axial_resolution(double fwhm_omega) {
    if (!(fwhm_omega > 0.0)) throw InvalidArgument("spectral FWHM must be > 0");
    return 2.0 * std::numbers::ln2 * units::c_um_per_fs / fwhm_omega;
}

/// Mirror-displacement FWHM (um) of an interferogram peak with delay FWHM in fs.
inline double displacement_fwhm(double fwhm_tau) { return units::delay_fs_to_mirror_um(fwhm_tau); }

} // namespace qoct::dsp
