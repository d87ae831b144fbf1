#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fps/cell.hpp"
#include "fps/constants.hpp"
#include "fps/transfer.hpp"
#include "fps/wavevectors.hpp"

namespace fps {

struct WaveSample {
  double x;
  Complex psi;
  Complex dpsi;
};

// Plane-wave/evanescent solution in one constant-potential region:
// psi(x) = forward e^{ik(x-x0)} + backward e^{-ik(x-x0)}.
struct RegionWave {
  double x0;
  double width;
  double potential_ev;
  Complex k;
  Complex forward;
  Complex backward;
};

// Stationary scattering state of a unit-amplitude wave incident from the left
// on n periods of the cell. Per-region coefficients are exact up to
// arithmetic; nothing is discretized.
class ScatteringState {
 public:
  double energy = 0.0;
  int periods = 0;
  double mass_ratio = 1.0;
  double k_halfspace = 0.0;
  double length = 0.0;
  Complex r, t;                     // n-period reflection/transmission amplitudes
  double incident_current = 0.0;    // j_in = hbar k / m*
  std::vector<RegionWave> regions;

  const RegionWave& region_at(double x) const {
    if (x < -1e-12 || x > length + 1e-12)
      throw std::domain_error("ScatteringState: x outside [0, L]");
    std::size_t i = 0;
    while (i + 1 < regions.size() && x >= regions[i].x0 + regions[i].width) ++i;
    return regions[i];
  }

  Complex psi(double x) const {
    const RegionWave& rw = region_at(x);
    const double dx = x - rw.x0;
    const Complex e = std::exp(Complex(0.0, 1.0) * rw.k * dx);
    return rw.forward * e + rw.backward / e;
  }

  Complex dpsi(double x) const {
    const RegionWave& rw = region_at(x);
    const double dx = x - rw.x0;
    const Complex e = std::exp(Complex(0.0, 1.0) * rw.k * dx);
    return Complex(0.0, 1.0) * rw.k * (rw.forward * e - rw.backward / e);
  }

  // Probability current (hbar/m*) Im(psi* psi'); constant in x for a
  // stationary state.
  double current(double x) const {
    return hbar_over_mass(mass_ratio) * std::imag(std::conj(psi(x)) * dpsi(x));
  }

  std::vector<WaveSample> samples(int per_layer = 64) const {
    std::vector<WaveSample> out;
    out.reserve(regions.size() * per_layer + 1);
    for (const RegionWave& rw : regions)
      for (int i = 0; i < per_layer; ++i) {
        const double x = rw.x0 + rw.width * i / per_layer;
        out.push_back({x, psi(x), dpsi(x)});
      }
    out.push_back({length, psi(length), dpsi(length)});
    return out;
  }

  // Closed-form integral of |psi|^2 over the regions [begin, end).
  double probability_integral(std::size_t begin, std::size_t end) const {
    double total = 0.0;
    for (std::size_t i = begin; i < std::min(end, regions.size()); ++i)
      total += region_probability(regions[i]);
    return total;
  }

  double probability_integral() const { return probability_integral(0, regions.size()); }

 private:
  // integral of e^{alpha x} over [0, w], stable near alpha = 0
  static double exp_integral(double alpha, double w) {
    if (alpha == 0.0) return w;
    return std::expm1(alpha * w) / alpha;
  }

  // integral of e^{i beta x} over [0, w]
  static Complex osc_integral(double beta, double w) {
    if (beta == 0.0) return {w, 0.0};
    const double half = 0.5 * beta * w;
    const double s = std::sin(half);
    return {std::sin(beta * w) / beta, 2.0 * s * s / beta};
  }

  double region_probability(const RegionWave& rw) const {
    const double p = rw.k.real();
    const double sig = rw.k.imag();
    const double direct = std::norm(rw.forward) * exp_integral(-2.0 * sig, rw.width) +
                          std::norm(rw.backward) * exp_integral(2.0 * sig, rw.width);
    const Complex cross =
        rw.forward * std::conj(rw.backward) * osc_integral(2.0 * p, rw.width);
    return direct + 2.0 * cross.real();
  }
};

inline ScatteringState scattering_state(double energy, const UnitCell& cell, int n) {
  validate(cell);
  if (!(energy > 0.0)) throw std::domain_error("scattering_state: energy must be > 0");
  if (n < 1) throw std::invalid_argument("scattering_state: n must be >= 1");

  ScatteringState st;
  st.energy = energy;
  st.periods = n;
  st.mass_ratio = cell.effective_mass_ratio;
  st.k_halfspace = wavevector_well(energy, cell);
  st.length = n * cell.period();
  st.incident_current = free_velocity(st.k_halfspace, st.mass_ratio);

  // full-structure matrix along the same arithmetic path used to propagate
  // the coefficients, so r and t are consistent to machine precision
  detail::Mat2 m{1.0, 0.0, 0.0, 1.0};
  const Complex k0(st.k_halfspace, 0.0);
  Complex kprev = k0;
  std::vector<Complex> ks;
  for (int p = 0; p < n; ++p)
    for (const Layer& l : cell.layers) {
      const Complex kl = layer_wavevector(energy, l.potential_ev, cell.effective_mass_ratio);
      ks.push_back(kl);
      m = detail::mul(m, detail::interface(kprev, kl));
      m = detail::mul(m, detail::propagation(kl, l.width_nm));
      kprev = kl;
    }
  m = detail::mul(m, detail::interface(kprev, k0));
  st.t = 1.0 / m.m00;
  st.r = m.m10 / m.m00;

  // walk the coefficients left to right
  Complex fw = 1.0, bw = st.r;
  kprev = k0;
  double x0 = 0.0;
  std::size_t li = 0;
  for (int p = 0; p < n; ++p)
    for (const Layer& l : cell.layers) {
      const Complex kl = ks[li++];
      const detail::Mat2 inv = detail::interface(kl, kprev);
      const Complex f2 = inv.m00 * fw + inv.m01 * bw;
      const Complex b2 = inv.m10 * fw + inv.m11 * bw;
      st.regions.push_back({x0, l.width_nm, l.potential_ev, kl, f2, b2});
      const Complex e = std::exp(Complex(0.0, 1.0) * kl * l.width_nm);
      fw = f2 * e;
      bw = b2 / e;
      kprev = kl;
      x0 += l.width_nm;
    }
  const detail::Mat2 out = detail::interface(k0, kprev);
  const Complex f_end = out.m00 * fw + out.m01 * bw;
  const Complex b_end = out.m10 * fw + out.m11 * bw;
  if (std::abs(f_end - st.t) + std::abs(b_end) > 1e-6 * (1.0 + std::abs(st.t)))
    throw std::runtime_error("scattering_state: coefficient propagation inconsistent");
  return st;
}

// tau_D = (1/v_in) integral of |psi|^2 over the structure.
inline double dwell_time(const ScatteringState& st) {
  return st.probability_integral() / st.incident_current;
}

}  // namespace fps
