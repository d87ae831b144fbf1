#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "fps/band.hpp"
#include "fps/cell.hpp"
#include "fps/constants.hpp"
#include "fps/errors.hpp"
#include "fps/quadrature.hpp"
#include "fps/scattering.hpp"
#include "fps/transfer.hpp"

namespace fps {

namespace detail {

inline Complex tilde_alpha_xi(const TransferMatrix& m, Complex t_n, Complex xi) {
  const Complex den = m.a - m.b - xi;
  if (std::abs(den) < 1e-14 * (std::abs(m.a) + 1.0))
    throw degenerate_decomposition_error("tilde_alpha: vanishing denominator");
  return (std::conj(m.a) - std::conj(m.b) - xi) / den * (t_n / std::conj(t_n));
}

}  // namespace detail

// Coefficient ratio of the -q and +q Bloch waves inside the structure,
//
//   alpha~ = (a* - b* - xi)/(a - b - xi) * t^(n)/t^(n)*,   xi = e^{iqd};
//
// its modulus is a property of the unit cell alone (n-independent) and
// reaches 1 exactly at the band edges. Bands where Im a > 0 are mirrored
// (q -> -q) so that the forward Bloch wave always carries the coefficient 1.
inline Complex tilde_alpha(double energy, const UnitCell& cell, int n,
                           const BandWindow& window) {
  const TransferMatrix m = unit_cell_matrix(energy, cell);
  const int sign = band_orientation(window, cell);
  const double q = bloch_q(energy, window, cell);
  const Complex xi = std::exp(Complex(0.0, sign * q * window.period));
  const Complex tn = transmission_amplitude(nth_power_chebyshev(m, n));
  return detail::tilde_alpha_xi(m, tn, xi);
}

// |alpha~|^2 in closed form: (|Im a| - sqrt(1 - Re^2 a)) / (|Im a| + sqrt(..)).
inline double tilde_alpha_abs2_closed_form(double energy, const BandWindow& window,
                                           const UnitCell& cell) {
  if (energy < window.e_low || energy > window.e_high)
    throw out_of_band_error("tilde_alpha_abs2_closed_form: energy outside band");
  const TransferMatrix m = unit_cell_matrix(energy, cell);
  const double x = std::clamp(m.a.real(), -1.0, 1.0);
  const double root = std::sqrt(1.0 - x * x);
  const double ima = std::abs(m.a.imag());
  return (ima - root) / (ima + root);
}

// The wave function split into its two Bloch components,
//   psi(x) = alpha_q u_q(x) e^{iqx} + alpha_{-q} u_q*(x) e^{-iqx},
// with u_q normalized to d/(2 pi) over one period and alpha_q gauged real
// positive.
struct BlochDecomposition {
  Complex alpha_q;
  Complex alpha_minus_q;
  Complex tilde_alpha;  // alpha_{-q} / alpha_q*
  double q = 0.0;       // principal branch [0, pi/d]
  int orientation = 1;  // +1: forward wave carries +q
  double period = 0.0;
  std::vector<std::pair<double, Complex>> u_q_samples;  // one period
};

namespace detail {

// alpha_q u_q(x) e^{iqx} = (psi - alpha~ psi*) / (1 - |alpha~|^2): the forward
// Bloch component, directly from the sampled state.
inline Complex forward_component(const ScatteringState& st, Complex ta, double x) {
  const Complex p = st.psi(x);
  return (p - ta * std::conj(p)) / (1.0 - std::norm(ta));
}

inline Complex forward_component_derivative(const ScatteringState& st, Complex ta,
                                            double x) {
  const Complex dp = st.dpsi(x);
  return (dp - ta * std::conj(dp)) / (1.0 - std::norm(ta));
}

}  // namespace detail

// alpha_q u_q(x): the periodic part scaled by the forward coefficient.
inline Complex tilde_u_q(const ScatteringState& st, const BlochDecomposition& dec,
                         double x) {
  const double qe = dec.orientation * dec.q;
  return detail::forward_component(st, dec.tilde_alpha, x) *
         std::exp(Complex(0.0, -qe * x));
}

inline Complex periodic_part(const ScatteringState& st, const BlochDecomposition& dec,
                             double x) {
  return tilde_u_q(st, dec, x) / dec.alpha_q;
}

// psi rebuilt from the decomposition using the periodic part of the first
// period only, extended by u_q(x + d) = u_q(x).
inline Complex reconstruct_psi(const ScatteringState& st, const BlochDecomposition& dec,
                               double x) {
  double x1 = std::fmod(x, dec.period);
  if (x1 < 0.0) x1 += dec.period;
  const Complex u = tilde_u_q(st, dec, x1);
  const Complex ph = std::exp(Complex(0.0, dec.orientation * dec.q * x));
  return u * ph + dec.tilde_alpha * std::conj(u) / ph;
}

inline BlochDecomposition bloch_coefficients(const ScatteringState& st,
                                             const BandWindow& window,
                                             const UnitCell& cell) {
  BlochDecomposition dec;
  dec.orientation = band_orientation(window, cell);
  dec.q = bloch_q(st.energy, window, cell);
  dec.period = window.period;
  dec.tilde_alpha = tilde_alpha(st.energy, cell, st.periods, window);

  const double weight = 1.0 - std::norm(dec.tilde_alpha);
  const GroupVelocity vg = group_velocity(st.energy, window, cell);
  if (weight <= 1e-10 || vg.at_band_edge)
    throw degenerate_decomposition_error(
        "bloch_coefficients: |alpha~| -> 1, coefficients diverge at the band edge");
  if (std::abs(std::abs(st.t) - 1.0) > 1e-6)
    throw off_resonance_error(
        "bloch_coefficients: closed-form coefficients hold only at resonance");

  // the forward Bloch wave moves at |v_g| whatever the band orientation
  const double radicand = 2.0 * std::numbers::pi * st.incident_current /
                          (weight * dec.orientation * vg.value);
  if (!(radicand > 0.0))
    throw degenerate_decomposition_error("bloch_coefficients: non-positive norm");
  dec.alpha_q = std::sqrt(radicand);  // real positive gauge
  dec.alpha_minus_q = dec.tilde_alpha * dec.alpha_q;

  const int per_layer = 64;
  for (const RegionWave& rw : st.regions) {
    if (rw.x0 >= dec.period) break;
    for (int i = 0; i < per_layer; ++i) {
      const double x = rw.x0 + rw.width * i / per_layer;
      dec.u_q_samples.emplace_back(x, periodic_part(st, dec, x));
    }
  }
  return dec;
}

// Sampled alpha_q u_q(x) over the whole structure, for periodicity checks.
inline std::vector<std::pair<double, Complex>> extract_uq(const ScatteringState& st,
                                                          const BlochDecomposition& dec,
                                                          int per_layer = 64) {
  std::vector<std::pair<double, Complex>> out;
  for (const RegionWave& rw : st.regions)
    for (int i = 0; i < per_layer; ++i) {
      const double x = rw.x0 + rw.width * i / per_layer;
      out.emplace_back(x, tilde_u_q(st, dec, x));
    }
  return out;
}

struct VelocityExpectation {
  double quadrature;    // <psi|v P|psi> / <psi|P|psi> from the state
  double closed_form;   // (1 - |alpha~|^2)/(1 + |alpha~|^2) v_g
  Complex numerator;    // <psi|v P|psi>, nm^2/fs
  double denominator;   // <psi|P|psi>, nm
  double hermiticity;   // |Im numerator| / |Re numerator|
};

// Velocity expectation value over the structure region; meaningful at
// transmission resonances, where the operator has a real expectation value.
inline VelocityExpectation velocity_expectation(const ScatteringState& st,
                                                const BandWindow& window,
                                                const UnitCell& cell) {
  if (std::abs(std::abs(st.t) - 1.0) > 1e-6)
    throw off_resonance_error(
        "velocity_expectation: closed form invalid off resonance");

  const Complex minus_i_hbar_over_m(0.0, -hbar_over_mass(st.mass_ratio));
  Complex num{};
  double den = 0.0;
  for (const RegionWave& rw : st.regions) {
    num += integrate_gauss(
        [&](double x) { return std::conj(st.psi(x)) * st.dpsi(x); }, rw.x0,
        rw.x0 + rw.width);
    den += integrate_gauss([&](double x) { return std::norm(st.psi(x)); }, rw.x0,
                           rw.x0 + rw.width);
  }
  num *= minus_i_hbar_over_m;

  const double ta2 = std::norm(tilde_alpha(st.energy, cell, st.periods, window));
  const double vg = band_orientation(window, cell) *
                    group_velocity(st.energy, window, cell).value;

  VelocityExpectation out;
  out.numerator = num;
  out.denominator = den;
  out.quadrature = num.real() / den;
  out.closed_form = (1.0 - ta2) / (1.0 + ta2) * vg;
  out.hermiticity = std::abs(num.imag()) / std::abs(num.real());
  return out;
}

// Cross terms of the Bloch expansion that must vanish at resonance: the
// integrals mixing the +q and -q components of <v> and of the norm, relative
// to their diagonal counterparts.
struct AppendixChecks {
  double velocity_cross_rel;
  double density_cross_rel;
};

inline AppendixChecks appendix_integral_checks(const ScatteringState& st,
                                               const BlochDecomposition& dec) {
  const Complex ta = dec.tilde_alpha;
  Complex i1{}, d1{}, i2{};
  double d2 = 0.0;
  for (const RegionWave& rw : st.regions) {
    i1 += integrate_gauss(
        [&](double x) {
          return detail::forward_component(st, ta, x) *
                 detail::forward_component_derivative(st, ta, x);
        },
        rw.x0, rw.x0 + rw.width);
    d1 += integrate_gauss(
        [&](double x) {
          return std::conj(detail::forward_component(st, ta, x)) *
                 detail::forward_component_derivative(st, ta, x);
        },
        rw.x0, rw.x0 + rw.width);
    i2 += integrate_gauss(
        [&](double x) {
          const Complex f = detail::forward_component(st, ta, x);
          return f * f;
        },
        rw.x0, rw.x0 + rw.width);
    d2 += integrate_gauss(
        [&](double x) { return std::norm(detail::forward_component(st, ta, x)); },
        rw.x0, rw.x0 + rw.width);
  }
  return {std::abs(i1) / std::abs(d1), std::abs(i2) / d2};
}

}  // namespace fps
