#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fps/cell.hpp"
#include "fps/constants.hpp"

namespace fps {

// k = sqrt(2 m* E)/hbar in the wells and half-spaces, in 1/nm.
inline double wavevector_well(double energy, const UnitCell& cell) {
  if (!(energy > 0.0))
    throw std::domain_error("wavevector_well: energy must be > 0");
  return std::sqrt(energy * cell.effective_mass_ratio / constants::hbar2_over_2m0);
}

// kappa = sqrt(2 m* (Vb - E))/hbar, the evanescent decay constant below the
// barrier. Above the barrier the wave propagates; callers needing that regime
// use the complex continuation built into the matrix routines.
inline double decay_constant_barrier(double energy, double barrier_ev, const UnitCell& cell) {
  if (!(energy > 0.0))
    throw std::domain_error("decay_constant_barrier: energy must be > 0");
  if (!(energy < barrier_ev))
    throw std::domain_error(
        "decay_constant_barrier: E >= Vb is the propagating-barrier regime; "
        "use the analytic continuation");
  return std::sqrt((barrier_ev - energy) * cell.effective_mass_ratio /
                   constants::hbar2_over_2m0);
}

struct CCoefficients {
  double c1;  // (k/kappa + kappa/k)/2, >= 1
  double c2;  // (k/kappa - kappa/k)/2; c1^2 - c2^2 = 1
};

inline CCoefficients c_coefficients(double k, double kappa) {
  if (!(k > 0.0) || !(kappa > 0.0))
    throw std::domain_error("c_coefficients: wavenumbers must be > 0");
  const double r = k / kappa;
  return {0.5 * (r + 1.0 / r), 0.5 * (r - 1.0 / r)};
}

// Wavevector of a layer at arbitrary energy, continued to the evanescent
// regime: purely imaginary below the layer potential. At E equal to the
// layer potential the plane-wave basis degenerates (the solution is linear
// in x), so k^2 is nudged off exact zero; the composed slab matrix is
// analytic in k^2 and the induced error is below double precision.
inline std::complex<double> layer_wavevector(double energy, double potential_ev,
                                             double mass_ratio) {
  double u = (energy - potential_ev) * mass_ratio / constants::hbar2_over_2m0;
  if (std::abs(u) < 1e-16) u = 1e-16;
  return std::sqrt(std::complex<double>(u, 0.0));
}

namespace detail {

// cosh(w sqrt(u)) and sinh(w sqrt(u))/sqrt(u) as entire functions of u =
// kappa^2, valid for either sign of u. Series near u = 0 keeps the kappa -> 0
// limit (E -> Vb) finite and fully accurate.
inline double cosh_scaled(double u, double w) {
  const double z2 = u * w * w;
  if (std::abs(z2) < 1e-4)
    return 1.0 + z2 / 2.0 + z2 * z2 / 24.0 + z2 * z2 * z2 / 720.0;
  if (u > 0.0) return std::cosh(w * std::sqrt(u));
  return std::cos(w * std::sqrt(-u));
}

inline double sinh_ratio(double u, double w) {
  const double z2 = u * w * w;
  if (std::abs(z2) < 1e-4)
    return w * (1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0);
  if (u > 0.0) {
    const double s = std::sqrt(u);
    return std::sinh(w * s) / s;
  }
  const double s = std::sqrt(-u);
  return std::sin(w * s) / s;
}

inline double sinh_ratio_du(double u, double w) {
  const double z2 = u * w * w;
  if (std::abs(z2) < 1e-4)
    return w * w * w * (1.0 / 6.0 + z2 / 60.0 + z2 * z2 / 1680.0);
  return (w * cosh_scaled(u, w) - sinh_ratio(u, w)) / (2.0 * u);
}

}  // namespace detail

}  // namespace fps
