#pragma once

#include <cmath>
#include <vector>

#include "qoct/efficiency.hpp"

/// Smooth stand-in detector curves for synthetic round trips.
namespace qoct::synthetic {

/// Silicon-like visible detector, 350-1100 nm, peak 0.7 near 650 nm.
inline EfficiencyCurve visible_detector() {
    std::vector<double> nm, eta;
    for (double l = 350.0; l <= 1100.0 + 1e-9; l += 5.0) {
        nm.push_back(l);
        const double x = (l - 650.0) / 450.0;
        eta.push_back(0.7 * std::exp(-x * x) + 0.05);
    }
    return EfficiencyCurve::from_wavelengths(nm, eta, "synthetic VIS");
}

/// InGaAs-like infrared detector, 900-1700 nm.
inline EfficiencyCurve infrared_detector() {
    std::vector<double> nm, eta;
    for (double l = 900.0; l <= 1700.0 + 1e-9; l += 5.0) {
        nm.push_back(l);
        const double x = (l - 1300.0) / 400.0;
        eta.push_back(0.8 - 0.3 * x * x);
    }
    return EfficiencyCurve::from_wavelengths(nm, eta, "synthetic IR");
}

} // namespace qoct::synthetic
