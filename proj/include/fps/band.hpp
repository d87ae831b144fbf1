#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "fps/cell.hpp"
#include "fps/constants.hpp"
#include "fps/errors.hpp"
#include "fps/rootfind.hpp"
#include "fps/transfer.hpp"

namespace fps {

struct EnergyScan {
  double e_min = 1e-6;  // eV
  double e_max = 1.0;
  double step = 1e-4;   // fine enough not to skip a band
};

// One allowed band of the infinite periodic medium: |Re a(E)| <= 1 between
// the polished edges.
struct BandWindow {
  int band_index = 1;
  double e_low = 0.0;
  double e_high = 0.0;
  double period = 0.0;
  bool truncated_high = false;  // scan window ended inside the band
};

struct DispersionPoint {
  double energy;
  double q;  // Bloch wavenumber in [0, pi/d]
  int band_index;
};

namespace detail {

inline double re_a(double energy, const UnitCell& cell) {
  if (is_barrier_well(cell)) return barrier_well_eval(energy, cell).re_a;
  return composed_cell_matrix(energy, cell).a.real();
}

inline double im_a(double energy, const UnitCell& cell) {
  return unit_cell_matrix(energy, cell).a.imag();
}

}  // namespace detail

// Scan E upward and return the band_index-th interval with |Re a| <= 1,
// edges polished by root solving |Re a| - 1 = 0.
inline BandWindow find_band(const UnitCell& cell, int band_index,
                            const EnergyScan& scan = {}) {
  validate(cell);
  if (band_index < 1) throw std::invalid_argument("find_band: band index must be >= 1");
  if (!(scan.step > 0.0) || !(scan.e_min > 0.0) || !(scan.e_min < scan.e_max))
    throw std::invalid_argument("find_band: invalid scan window");

  const auto outside = [&](double e) { return std::abs(detail::re_a(e, cell)) - 1.0; };
  const auto polish = [&](double lo, double hi) {
    return find_root_bracketed(outside, lo, hi);
  };

  int found = 0;
  bool inside = outside(scan.e_min) <= 0.0;
  double entry = inside ? scan.e_min : 0.0;  // unpolished when scan starts in-band
  bool entry_polished = false;
  double e = scan.e_min;
  while (e < scan.e_max) {
    const double e2 = std::min(e + scan.step, scan.e_max);
    const bool inside2 = outside(e2) <= 0.0;
    if (inside2 != inside) {
      const double edge = polish(e, e2);
      if (inside2) {
        entry = edge;
        entry_polished = true;
      } else {
        ++found;
        if (found == band_index)
          return {band_index, entry, edge, cell.period(), false};
      }
      inside = inside2;
    }
    e = e2;
  }
  if (inside) {
    if (found == 0 && !entry_polished)
      throw free_medium_error(
          "find_band: every scanned energy is in an allowed band; degenerate "
          "(free-medium) edges");
    if (found + 1 == band_index)
      return {band_index, entry, scan.e_max, cell.period(), true};
  }
  throw band_not_found_error("find_band: band " + std::to_string(band_index) +
                             " not found in scan window");
}

// q = arccos(Re a)/d on the principal branch [0, pi/d].
inline double bloch_q(double energy, const BandWindow& window, const UnitCell& cell) {
  if (energy < window.e_low || energy > window.e_high)
    throw out_of_band_error("bloch_q: energy outside band window");
  double x = detail::re_a(energy, cell);
  x = std::clamp(x, -1.0, 1.0);
  return std::acos(x) / window.period;
}

inline DispersionPoint dispersion_point(double energy, const BandWindow& window,
                                        const UnitCell& cell) {
  return {energy, bloch_q(energy, window, cell), window.band_index};
}

struct GroupVelocity {
  double value = 0.0;       // nm/fs; negative for inverted bands
  bool at_band_edge = false;
};

// v_g = (hbar dq/dE)^-1 = d sqrt(1 - Re^2 a) / (-hbar dRe a/dE).
inline GroupVelocity group_velocity(double energy, const BandWindow& window,
                                    const UnitCell& cell) {
  if (energy < window.e_low || energy > window.e_high)
    throw out_of_band_error("group_velocity: energy outside band window");
  const double x = detail::re_a(energy, cell);
  const double s2 = 1.0 - x * x;
  if (s2 <= 1e-12) return {0.0, true};
  const double dre = cell_matrix_energy_derivative(energy, cell).d_re_a;
  return {window.period * std::sqrt(s2) / (-dre) / constants::hbar, false};
}

// Sign convention of the band: +1 where Im a < 0 in the band interior (the
// lowest miniband of a barrier-well cell), -1 otherwise. Im a cannot vanish
// inside a band of a non-transparent cell, so the midpoint decides.
inline int band_orientation(const BandWindow& window, const UnitCell& cell) {
  const double mid = 0.5 * (window.e_low + window.e_high);
  return detail::im_a(mid, cell) < 0.0 ? 1 : -1;
}

}  // namespace fps
