#pragma once

#include <cmath>
#include <numbers>

namespace scmra {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kReferenceTemperature = 290.0;  // K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

/// Power ratio in dB -> linear.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Amplitude ratio in dB (20 log10) -> linear amplitude.
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double w) { return linear_to_db(w / 1e-3); }

inline double wavelength_for(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

}  // namespace scmra
