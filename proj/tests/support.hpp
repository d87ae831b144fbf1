#pragma once

#include <complex>
#include <functional>

#include "fps/cell.hpp"

// Shared fixtures and expected values for the test suite. The numeric
// constants were frozen from independent oracles run before the library was
// written: plain bisection on a 1 ueV dense scan for band edges and resonance
// energies, composite-Simpson quadrature of |psi|^2 for the dwell time, and
// hand/script evaluation of the closed-form matrix elements.
namespace testsupport {

inline fps::UnitCell reference_cell() {
  return {{{2.5, 0.288}, {6.5, 0.0}}, 0.072};
}

inline fps::UnitCell free_cell(double width = 9.0, double mass = 0.072) {
  return {{{width, 0.0}}, mass};
}

// wavevectors (hand arithmetic from the frozen constants)
inline constexpr double k_at_288mev = 0.737736081197;       // 1/nm
inline constexpr double kappa_at_100mev = 0.596051390152;   // 1/nm

// unit-cell matrix at E = 0.050 eV (script evaluation of the closed forms)
inline const std::complex<double> a_at_50mev{0.876885090468530, -3.439747459670684};
inline const std::complex<double> b_at_50mev{-3.099839788397986, -1.411305542560382};

// lowest two minibands (1 ueV dense scan + bisection)
inline constexpr double band1_low = 0.048896757858;
inline constexpr double band1_high = 0.072576060827;
inline constexpr double band2_low = 0.185813511063;
inline constexpr double band2_high = 0.287822573444;

// the five transmission-unity levels of the six-period structure, band 1
inline constexpr double resonance_energy[5] = {
    0.050098738139, 0.053574543062, 0.058876517445,
    0.065053598411, 0.070385628966};

// dwell time at the j = 3 level (Simpson quadrature of |psi|^2 / j_in)
inline constexpr double tau_dwell_j3 = 1128.729147350;  // fs

// |alpha~| at the j = 3 level, any n
inline constexpr double tilde_alpha_abs_j3 = 0.727602435400;

// complex tunneling time in the gap above band 1 (central difference of
// ln t^(6) with a 1e-6 eV step); regression values
inline constexpr double midgap_energy = 0.129194785945;
inline constexpr double midgap_tau_te_re = 13.958478478943;  // fs
inline constexpr double midgap_tau_te_im = -18.169655844343;

// composite Simpson; test-side quadrature oracle, independent of the
// closed-form integrals and of the Gauss rule in the library
template <class F>
auto simpson(F&& f, double a, double b, int panels = 2000) {
  const double h = (b - a) / (2 * panels);
  auto s = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * (h / 3.0);
}

}  // namespace testsupport
