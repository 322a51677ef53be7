#pragma once

#include <numbers>

/// Internal unit system: angular frequency in rad/fs, time in fs, length in um.
namespace qoct::units {

inline constexpr double pi = std::numbers::pi;

/// Speed of light in um/fs.
inline constexpr double c_um_per_fs = 0.299792458;

/// Ordinary frequency in THz to angular frequency in rad/fs (1 THz = 1e-3 fs^-1).
constexpr double thz_to_rad_per_fs(double thz) { return 2.0 * pi * thz * 1e-3; }
constexpr double rad_per_fs_to_thz(double omega) { return omega / (2.0 * pi * 1e-3); }

/// Vacuum wavelength in nm to angular frequency in rad/fs.
constexpr double wavelength_nm_to_rad_per_fs(double nm) { return 2.0 * pi * c_um_per_fs / (nm * 1e-3); }
constexpr double rad_per_fs_to_wavelength_nm(double omega) { return 2.0 * pi * c_um_per_fs / omega * 1e3; }

// Michelson double pass: a mirror displacement z changes the delay by 2z/c.
constexpr double delay_fs_to_mirror_um(double tau) { return 0.5 * c_um_per_fs * tau; }
constexpr double mirror_um_to_delay_fs(double z) { return 2.0 * z / c_um_per_fs; }

} // namespace qoct::units
