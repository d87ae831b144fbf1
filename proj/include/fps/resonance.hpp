#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fps/band.hpp"
#include "fps/cell.hpp"
#include "fps/chebyshev.hpp"
#include "fps/constants.hpp"
#include "fps/errors.hpp"
#include "fps/rootfind.hpp"
#include "fps/scattering.hpp"
#include "fps/transfer.hpp"

namespace fps {

// One transmission-unity state of the n-period structure: Re a(E_j) =
// cos(j pi / n), Bloch wavenumber q_j = j pi / (n d).
struct ResonanceLevel {
  int periods;
  int j;  // 1 .. n-1
  int band_index;
  double energy;
  double q;
};

// All n-1 resonances of one band, ordered by energy. A band truncated by the
// scan window raises partial_band_error naming the missing j.
inline std::vector<ResonanceLevel> find_resonances(const UnitCell& cell, int n,
                                                   int band_index,
                                                   const EnergyScan& scan = {}) {
  if (n < 2) throw std::invalid_argument("find_resonances: n must be >= 2");
  const BandWindow window = find_band(cell, band_index, scan);
  const double d = window.period;

  const auto re_a = [&](double e) { return detail::re_a(e, cell); };
  const double lo = window.e_low + 1e-13;
  const double hi = window.e_high - 1e-13;
  const int steps = std::max(512, 64 * n);

  std::vector<ResonanceLevel> levels;
  std::vector<int> missing;
  for (int j = 1; j < n; ++j) {
    const double target = std::cos(j * std::numbers::pi / n);
    bool located = false;
    double e = lo;
    double f = re_a(e) - target;
    for (int s = 1; s <= steps && !located; ++s) {
      const double e2 = lo + (hi - lo) * s / steps;
      const double f2 = re_a(e2) - target;
      if (f == 0.0 || (f > 0.0) != (f2 > 0.0)) {
        const double root =
            find_root_bracketed([&](double x) { return re_a(x) - target; }, e, e2);
        levels.push_back({n, j, band_index, root, j * std::numbers::pi / (n * d)});
        located = true;
      }
      e = e2;
      f = f2;
    }
    if (!located) missing.push_back(j);
  }
  if (!missing.empty()) {
    std::string msg = "find_resonances: band truncated by scan window; missing j =";
    for (int j : missing) msg += " " + std::to_string(j);
    throw partial_band_error(msg, missing);
  }
  std::sort(levels.begin(), levels.end(),
            [](const ResonanceLevel& a, const ResonanceLevel& b) {
              return a.energy < b.energy;
            });
  return levels;
}

// Phase (delay) time of the n-period structure,
//
//   tau = hbar T^(n) [ (n - Re a / 2 U_{2n-1}) Im a / (1 - Re^2 a) dRe a/dE
//                      - U_{2n-1} / 2  dIm a/dE ],
//
// valid in bands and gaps alike; singular exactly where |Re a| = 1.
inline double phase_time(double energy, const UnitCell& cell, int n) {
  if (n < 1) throw std::invalid_argument("phase_time: n must be >= 1");
  const TransferMatrix m = unit_cell_matrix(energy, cell);
  const double x = m.a.real();
  const double s2 = 1.0 - x * x;
  if (std::abs(s2) < 1e-13)
    throw singular_point_error("phase_time: |Re a| = 1 (band edge)");
  const CellDerivatives der = cell_matrix_energy_derivative(energy, cell);
  const double u2 = chebyshev_u(2 * n - 1, x);
  const double tn = transmission_chebyshev(m, n);
  return constants::hbar * tn *
         ((n - 0.5 * x * u2) * m.a.imag() / s2 * der.d_re_a - 0.5 * u2 * der.d_im_a);
}

// In-resonance phase time: tau = hbar n Im a / (1 - Re^2 a) dRe a/dE.
// Proportional to n at fixed q.
inline double resonant_time(const ResonanceLevel& level, const UnitCell& cell) {
  const TransferMatrix m = unit_cell_matrix(level.energy, cell);
  const double x = m.a.real();
  const double s2 = 1.0 - x * x;
  if (std::abs(s2) < 1e-13)
    throw singular_point_error("resonant_time: level degenerate with band edge");
  const CellDerivatives der = cell_matrix_energy_derivative(level.energy, cell);
  return constants::hbar * level.periods * m.a.imag() / s2 * der.d_re_a;
}

// v_res = L / tau_res = d (1 - Re^2 a) / (-Im a) (-dRe a/dE)^-1 / hbar;
// independent of the number of periods.
inline double resonant_velocity(const ResonanceLevel& level, const UnitCell& cell) {
  const TransferMatrix m = unit_cell_matrix(level.energy, cell);
  const double x = m.a.real();
  const CellDerivatives der = cell_matrix_energy_derivative(level.energy, cell);
  return cell.period() * (1.0 - x * x) / (-m.a.imag()) / (-der.d_re_a) / constants::hbar;
}

// Same velocity expressed through the unit-cell transmission amplitude t and
// its energy derivative only:
//
//   v_res = d (|t|^4 - Re^2 t) / (|t|^2 Im t) (-Re{-t'/t^2})^-1 / hbar.
//
// Re{-t'/t^2} is the chain-rule image of dRe a/dE; substituting a plain
// dRe t/dE drops the d|t|/dE contribution and is exact only where Re a = 0.
inline double resonant_velocity_t_form(const ResonanceLevel& level, const UnitCell& cell) {
  const TransferMatrix m = unit_cell_matrix(level.energy, cell);
  const CellDerivatives der = cell_matrix_energy_derivative(level.energy, cell);
  const Complex t = 1.0 / m.a;
  const Complex dt = -Complex(der.d_re_a, der.d_im_a) / (m.a * m.a);
  const double slope = (-dt / (t * t)).real();
  const double t2 = std::norm(t);
  return cell.period() * (t2 * t2 - t.real() * t.real()) / (t2 * t.imag()) /
         (-slope) / constants::hbar;
}

struct EdgeFlagged {
  double value = 0.0;
  bool at_band_edge = false;
};

// v_res / v_g = sqrt(1 - Re^2 a) / |Im a|, in (0, 1]; bounded by the
// unit-cell |t|, with equality exactly at Re a = 0 (q = pi/2d).
inline EdgeFlagged velocity_ratio(double energy, const BandWindow& window,
                                  const UnitCell& cell) {
  if (energy < window.e_low || energy > window.e_high)
    throw out_of_band_error("velocity_ratio: energy outside band window");
  const TransferMatrix m = unit_cell_matrix(energy, cell);
  const double x = m.a.real();
  const double s2 = 1.0 - x * x;
  if (s2 <= 1e-12) return {0.0, true};
  return {std::sqrt(s2) / std::abs(m.a.imag()), false};
}

namespace detail {

inline Complex t_n_of(double energy, const UnitCell& cell, int n) {
  return transmission_amplitude(nth_power_chebyshev(unit_cell_matrix(energy, cell), n));
}

// ln t(+) - ln t(-) with the branch fixed by the ratio, valid for small steps
inline Complex log_ratio(Complex tp, Complex tm) {
  const Complex ratio = tp / tm;
  return {std::log(std::abs(ratio)), std::arg(ratio)};
}

}  // namespace detail

// tau_T^E = -i hbar d(ln t^(n))/dE by central difference. Real part is the
// phase time; the imaginary part vanishes at transmission unity.
inline Complex tunneling_time_energy(double energy, const UnitCell& cell, int n,
                                     double step = 1e-7) {
  if (!(step > 1e-14) || !(energy - step > 0.0))
    throw std::domain_error("tunneling_time_energy: step underflow");
  const Complex num = detail::log_ratio(detail::t_n_of(energy + step, cell, n),
                                        detail::t_n_of(energy - step, cell, n));
  return Complex(0.0, -constants::hbar) * num / (2.0 * step);
}

enum class PotentialShift {
  whole_structure,  // every layer of the FPS, half-spaces fixed
  barriers_only     // only layers with positive potential
};

// tau_T^V = i hbar d(ln t^(n))/dV by central difference in a uniform shift of
// the structure potential. Shifting the whole structure reproduces the phase
// time at resonance; shifting only the barriers clocks the barrier-restricted
// dwell instead.
inline Complex tunneling_time_potential(double energy, const UnitCell& cell, int n,
                                        double step = 1e-7,
                                        PotentialShift scope = PotentialShift::whole_structure) {
  if (!(step > 1e-14))
    throw std::domain_error("tunneling_time_potential: step underflow");
  const auto shifted = [&](double dv) {
    UnitCell c = cell;
    for (Layer& l : c.layers)
      if (scope == PotentialShift::whole_structure || l.potential_ev > 0.0)
        l.potential_ev += dv;
    return detail::t_n_of(energy, c, n);
  };
  const Complex num = detail::log_ratio(shifted(step), shifted(-step));
  return Complex(0.0, constants::hbar) * num / (2.0 * step);
}

// The competing time definitions evaluated at one level; all real parts
// coincide at resonance.
struct TimeReport {
  double tau_phase;
  double tau_res;
  double tau_dwell;
  Complex tau_te;
  Complex tau_tv;
};

inline TimeReport time_report(const ResonanceLevel& level, const UnitCell& cell) {
  return {phase_time(level.energy, cell, level.periods),
          resonant_time(level, cell),
          dwell_time(scattering_state(level.energy, cell, level.periods)),
          tunneling_time_energy(level.energy, cell, level.periods),
          tunneling_time_potential(level.energy, cell, level.periods)};
}

}  // namespace fps
