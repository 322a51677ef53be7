#pragma once

#include <cmath>
#include <complex>

#include "qoct/errors.hpp"
#include "qoct/units.hpp"

namespace qoct {

/// Single-layer reflector H(w) = r exp(i[w T + kappa (w - omega0)^2]).
///
/// `dispersion` (fs^2) is the sample's quadratic spectral-phase coefficient.
/// It is unrelated to the source bandwidth constant in source.hpp.
struct SampleResponse {
    double amplitude = 1.0;   // r, 0 <= r <= 1
    double group_delay = 0.0; // T, fs
    double dispersion = 0.0;  // kappa, fs^2
    double omega0 = 0.0;      // expansion center, rad/fs

    double reflectivity() const noexcept { return amplitude * amplitude; }
    bool dispersive() const noexcept { return dispersion != 0.0; }

    std::complex<double> operator()(double omega) const {
        const double dw = omega - omega0;
        return std::polar(amplitude, omega * group_delay + dispersion * dw * dw);
    }

    void validate() const {
        if (!(amplitude >= 0.0 && amplitude <= 1.0)) throw InvalidArgument("sample.amplitude must lie in [0, 1]");
        if (!std::isfinite(group_delay)) throw InvalidArgument("sample.group_delay must be finite");
        if (!std::isfinite(dispersion)) throw InvalidArgument("sample.dispersion must be finite");
        if (dispersion != 0.0 && !(omega0 > 0.0)) throw InvalidArgument("sample.omega0 must be > 0 for a dispersive sample");
    }

    static SampleResponse from_reflectivity(double reflectivity, double group_delay = 0.0, double dispersion = 0.0,
                                            double omega0 = 0.0) {
        if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) throw InvalidArgument("sample.reflectivity must lie in [0, 1]");
        return {std::sqrt(reflectivity), group_delay, dispersion, omega0};
    }
};

inline std::complex<double> response(const SampleResponse& s, double omega) { return s(omega); }

/// Glass layer with linear index dispersion n(w) = index + index_slope (w - omega0).
struct MaterialLayer {
    double thickness = 0.0;   // um
    double index = 1.0;       // n0 at omega0
    double index_slope = 0.0; // dn/dw at omega0, fs/rad

    void validate() const {
        if (!(thickness > 0.0)) throw InvalidArgument("material.thickness must be > 0");
        if (!(index >= 1.0)) throw InvalidArgument("material.index must be >= 1");
        if (!std::isfinite(index_slope)) throw InvalidArgument("material.index_slope must be finite");
    }
};

/// Expands the layer's phase k d around omega0. The constant term
/// -(d/c) index_slope omega0^2 is dropped; it only shifts the fringe phase.
inline SampleResponse from_material(const MaterialLayer& layer, double amplitude, double omega0) {
    layer.validate();
    const double transit = layer.thickness / units::c_um_per_fs;
    SampleResponse s;
    s.amplitude = amplitude;
    s.group_delay = transit * (layer.index + layer.index_slope * omega0);
    s.dispersion = transit * layer.index_slope;
    s.omega0 = omega0;
    s.validate();
    return s;
}

} // namespace qoct
