#pragma once

namespace fps {

// Unit conventions used throughout: energies in eV, lengths in nm, times in
// fs, velocities in nm/fs (= 10^6 m/s), masses as ratios to the free electron
// mass. The two constants below are the only dimensional anchors.
namespace constants {

inline constexpr double hbar2_over_2m0 = 0.038099821;  // eV nm^2
inline constexpr double hbar = 0.6582119569;           // eV fs

}  // namespace constants

// hbar k / m* for a free carrier, in nm/fs.
inline double free_velocity(double k, double mass_ratio) {
  return 2.0 * constants::hbar2_over_2m0 * k / (constants::hbar * mass_ratio);
}

// hbar / m* in nm^2/fs; prefactor of the probability current.
inline double hbar_over_mass(double mass_ratio) {
  return 2.0 * constants::hbar2_over_2m0 / (constants::hbar * mass_ratio);
}

}  // namespace fps
