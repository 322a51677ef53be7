#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qoct/errors.hpp"
#include "qoct/units.hpp"

namespace qoct {

/// Tabulated detector quantum efficiency eta(omega), linearly interpolated.
/// Evaluation outside [omega_min, omega_max] is an error, never an extrapolation.
class EfficiencyCurve {
public:
    EfficiencyCurve() = default;

    EfficiencyCurve(std::vector<double> omega, std::vector<double> eta, std::string label = {})
        : omega_(std::move(omega)), eta_(std::move(eta)), label_(std::move(label)) {
        if (omega_.size() != eta_.size()) throw InvalidArgument("efficiency curve '" + label_ + "': column lengths differ");
        if (omega_.size() < 2) throw InvalidArgument("efficiency curve '" + label_ + "' needs at least two samples");
        for (std::size_t i = 0; i < omega_.size(); ++i) {
            if (!std::isfinite(omega_[i]) || !(eta_[i] >= 0.0 && eta_[i] <= 1.0))
                throw InvalidArgument("efficiency curve '" + label_ + "': efficiency must lie in [0, 1]");
            if (i > 0 && !(omega_[i] > omega_[i - 1]))
                throw InvalidArgument("efficiency curve '" + label_ + "': frequencies must be strictly increasing");
        }
    }

    /// Builds a curve from (wavelength in nm, efficiency) rows in any order.
    static EfficiencyCurve from_wavelengths(const std::vector<double>& wavelength_nm, const std::vector<double>& eta,
                                            std::string label = {}) {
        if (wavelength_nm.size() != eta.size()) throw InvalidArgument("efficiency table columns differ in length");
        std::vector<std::size_t> order(wavelength_nm.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return wavelength_nm[a] > wavelength_nm[b]; });
        std::vector<double> w, e;
        for (std::size_t i : order) {
            if (!(wavelength_nm[i] > 0.0)) throw InvalidArgument("efficiency table wavelengths must be > 0");
            w.push_back(units::wavelength_nm_to_rad_per_fs(wavelength_nm[i]));
            e.push_back(eta[i]);
        }
        return {std::move(w), std::move(e), std::move(label)};
    }

    static EfficiencyCurve constant(double eta, double omega_min, double omega_max, std::string label = {}) {
        return {{omega_min, omega_max}, {eta, eta}, std::move(label)};
    }

    double omega_min() const { return omega_.front(); }
    double omega_max() const { return omega_.back(); }
    bool covers(double omega) const { return !omega_.empty() && omega >= omega_min() && omega <= omega_max(); }
    const std::string& label() const { return label_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& eta() const { return eta_; }

    double operator()(double omega) const {
        if (!covers(omega))
            throw EfficiencyOutOfRange("efficiency curve '" + label_ + "' does not cover " + std::to_string(omega) +
                                       " rad/fs (" + std::to_string(units::rad_per_fs_to_wavelength_nm(omega)) + " nm)");
        const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
        if (it == omega_.end()) return eta_.back();
        const std::size_t j = static_cast<std::size_t>(it - omega_.begin());
        const double t = (omega - omega_[j - 1]) / (omega_[j] - omega_[j - 1]);
        return eta_[j - 1] + t * (eta_[j] - eta_[j - 1]);
    }

private:
    std::vector<double> omega_;
    std::vector<double> eta_;
    std::string label_;
};

} // namespace qoct
