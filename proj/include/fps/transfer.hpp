#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fps/cell.hpp"
#include "fps/chebyshev.hpp"
#include "fps/constants.hpp"
#include "fps/wavevectors.hpp"

namespace fps {

using Complex = std::complex<double>;

// Transfer matrix of a flux-conserving, time-reversal-symmetric region,
//
//     M = ( a  b  )        with |a|^2 - |b|^2 = det M = 1,
//         ( b* a* )
//
// relating plane-wave coefficients (A+, A-) on its left side to those on its
// right side, each referenced to the respective interface. The transmission
// and reflection amplitudes are t = 1/a and r = b*/a.
struct TransferMatrix {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
};

// n-fold power of a unit-cell matrix; same parameterization.
struct NPeriodMatrix {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  int periods = 1;
};

inline double determinant_residual(Complex a, Complex b) {
  return std::norm(a) - std::norm(b) - 1.0;
}
inline double determinant_residual(const TransferMatrix& m) {
  return determinant_residual(m.a, m.b);
}
inline double determinant_residual(const NPeriodMatrix& m) {
  return determinant_residual(m.a, m.b);
}

inline TransferMatrix compose(const TransferMatrix& m1, const TransferMatrix& m2) {
  return {m1.a * m2.a + m1.b * std::conj(m2.b),
          m1.a * m2.b + m1.b * std::conj(m2.a)};
}

inline TransferMatrix inverse(const TransferMatrix& m) {
  return {std::conj(m.a), -m.b};
}

inline Complex transmission_amplitude(const TransferMatrix& m) { return 1.0 / m.a; }
inline Complex transmission_amplitude(const NPeriodMatrix& m) { return 1.0 / m.a; }
inline Complex reflection_amplitude(const TransferMatrix& m) { return std::conj(m.b) / m.a; }
inline Complex reflection_amplitude(const NPeriodMatrix& m) { return std::conj(m.b) / m.a; }

// T^(n) = |a^(n)|^-2.
inline double transmission(const NPeriodMatrix& m) { return 1.0 / std::norm(m.a); }

// Equivalent form T^(n) = [1 + |b|^2 U_{n-1}^2(Re a)]^-1 straight from the
// unit cell.
inline double transmission_chebyshev(const TransferMatrix& unit, int n) {
  const double u = chebyshev_u(n - 1, unit.a.real());
  return 1.0 / (1.0 + std::norm(unit.b) * u * u);
}

// M^n through Chebyshev polynomials of the second kind:
//   a^(n) = a U_{n-1}(Re a) - U_{n-2}(Re a),   b^(n) = b U_{n-1}(Re a).
inline NPeriodMatrix nth_power_chebyshev(const TransferMatrix& m, int n) {
  if (n < 1) throw std::invalid_argument("nth_power_chebyshev: n must be >= 1");
  const double x = m.a.real();
  const double u1 = chebyshev_u(n - 1, x);
  const double u2 = chebyshev_u(n - 2, x);
  return {m.a * u1 - u2, m.b * u1, n};
}

namespace detail {

struct Mat2 {
  Complex m00, m01, m10, m11;
};

inline Mat2 mul(const Mat2& p, const Mat2& q) {
  return {p.m00 * q.m00 + p.m01 * q.m10, p.m00 * q.m01 + p.m01 * q.m11,
          p.m10 * q.m00 + p.m11 * q.m10, p.m10 * q.m01 + p.m11 * q.m11};
}

// Continuity across an interface from medium k1 into medium k2.
inline Mat2 interface(Complex k1, Complex k2) {
  const Complex r = k2 / k1;
  return {0.5 * (1.0 + r), 0.5 * (1.0 - r), 0.5 * (1.0 - r), 0.5 * (1.0 + r)};
}

// Re-referencing of coefficients across a slab of width w.
inline Mat2 propagation(Complex k, double w) {
  const Complex p = std::exp(Complex(0.0, -1.0) * k * w);
  return {p, 0.0, 0.0, 1.0 / p};
}

// Closed-form matrix elements of the barrier-well cell, evaluated through
// u = kappa^2 so one real-arithmetic path covers E below, at and above the
// barrier. Energy derivatives are analytic.
struct BarrierWellEval {
  double re_a, im_a;
  double d_re_a, d_im_a;
  Complex b;
};

inline BarrierWellEval barrier_well_eval(double energy, const UnitCell& cell) {
  if (!is_barrier_well(cell))
    throw std::invalid_argument("barrier_well_eval: cell is not a barrier-well pair");
  if (!(energy > 0.0)) throw std::domain_error("barrier_well_eval: energy must be > 0");

  const double lb = cell.layers[0].width_nm;
  const double vb = cell.layers[0].potential_ev;
  const double lw = cell.layers[1].width_nm;
  const double mu = cell.effective_mass_ratio / constants::hbar2_over_2m0;  // d(k^2)/dE

  const double k = std::sqrt(mu * energy);
  const double dk = 0.5 * mu / k;
  const double u = mu * (vb - energy);  // kappa^2; negative above the barrier
  const double du = -mu;

  const double ch = cosh_scaled(u, lb);
  const double sr = sinh_ratio(u, lb);
  const double dch = 0.5 * lb * sr * du;
  const double dsr = sinh_ratio_du(u, lb) * du;

  const double k2 = k * k;
  const double gm = (k2 - u) / (2.0 * k);  // c2 sinh(kappa Lb) = gm * sr
  const double gp = (k2 + u) / (2.0 * k);  // c1 sinh(kappa Lb) = gp * sr
  const double dgm = mu / k - gm * dk / k;

  const double cw = std::cos(k * lw), sw = std::sin(k * lw);
  const double dcw = -sw * lw * dk, dsw = cw * lw * dk;

  BarrierWellEval out;
  out.re_a = ch * cw - gm * sr * sw;
  out.im_a = -ch * sw - gm * sr * cw;
  out.d_re_a = dch * cw + ch * dcw - (dgm * sr + gm * dsr) * sw - gm * sr * dsw;
  out.d_im_a = -dch * sw - ch * dsw - (dgm * sr + gm * dsr) * cw - gm * sr * dcw;
  out.b = Complex(0.0, 1.0) * (gp * sr) * std::exp(Complex(0.0, k * lw));
  return out;
}

}  // namespace detail

// Closed-form unit-cell matrix for a barrier-well cell.
inline TransferMatrix barrier_well_cell_matrix(double energy, const UnitCell& cell) {
  const auto e = detail::barrier_well_eval(energy, cell);
  return {Complex(e.re_a, e.im_a), e.b};
}

namespace detail {

// Layer matrix in the (psi, psi') basis, mapping values at the left face to
// the right face. Entire in v = kappa^2 = 2m(V-E)/hbar^2, so propagating,
// evanescent and degenerate (E = V) layers share one real-arithmetic path:
//
//   ( cosh(w sqrt(v))          sinh(w sqrt(v))/sqrt(v) )
//   ( v sinh(w sqrt(v))/sqrt(v)      cosh(w sqrt(v))   )
struct PsiMat {
  double m00, m01, m10, m11;
};

inline PsiMat psi_layer(double v, double w) {
  const double c = cosh_scaled(v, w);
  const double s = sinh_ratio(v, w);
  return {c, s, v * s, c};
}

inline PsiMat mul(const PsiMat& p, const PsiMat& q) {
  return {p.m00 * q.m00 + p.m01 * q.m10, p.m00 * q.m01 + p.m01 * q.m11,
          p.m10 * q.m00 + p.m11 * q.m10, p.m10 * q.m01 + p.m11 * q.m11};
}

}  // namespace detail

// Unit-cell matrix of an arbitrary layer stack: layer matrices composed in
// the (psi, psi') basis, then converted to plane-wave coefficients in the
// half-space medium. The conversion yields the (a, b) structure identically.
inline TransferMatrix composed_cell_matrix(double energy, const UnitCell& cell) {
  validate(cell);
  if (!(energy > 0.0)) throw std::domain_error("composed_cell_matrix: energy must be > 0");
  const double mu = cell.effective_mass_ratio / constants::hbar2_over_2m0;
  detail::PsiMat m{1.0, 0.0, 0.0, 1.0};
  for (const Layer& l : cell.layers)
    m = detail::mul(detail::psi_layer(mu * (l.potential_ev - energy), l.width_nm), m);
  // inverse (det = 1) maps the right-face values back to the left face
  const double n00 = m.m11, n01 = -m.m01, n10 = -m.m10, n11 = m.m00;
  const double k0 = wavevector_well(energy, cell);
  return {Complex(0.5 * (n00 + n11), 0.5 * (k0 * n01 - n10 / k0)),
          Complex(0.5 * (n00 - n11), -0.5 * (k0 * n01 + n10 / k0))};
}

inline TransferMatrix unit_cell_matrix(double energy, const UnitCell& cell) {
  validate(cell);
  if (is_barrier_well(cell)) return barrier_well_cell_matrix(energy, cell);
  return composed_cell_matrix(energy, cell);
}

struct CellDerivatives {
  double d_re_a;
  double d_im_a;
};

// d(Re a)/dE and d(Im a)/dE: analytic for the barrier-well cell,
// Richardson-extrapolated central differences otherwise.
inline CellDerivatives cell_matrix_energy_derivative(double energy, const UnitCell& cell) {
  if (is_barrier_well(cell)) {
    const auto e = detail::barrier_well_eval(energy, cell);
    return {e.d_re_a, e.d_im_a};
  }
  const double h = std::min(1e-6, 0.5 * energy);
  const auto at = [&](double e) { return composed_cell_matrix(e, cell).a; };
  const Complex d1 = (at(energy + h) - at(energy - h)) / (2.0 * h);
  const Complex d2 = (at(energy + 0.5 * h) - at(energy - 0.5 * h)) / h;
  const Complex d = (4.0 * d2 - d1) / 3.0;
  return {d.real(), d.imag()};
}

}  // namespace fps
