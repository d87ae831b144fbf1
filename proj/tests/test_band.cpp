#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fps/band.hpp"
#include "fps/constants.hpp"
#include "fps/wavevectors.hpp"
#include "support.hpp"

using namespace fps;
using testsupport::free_cell;
using testsupport::reference_cell;

TEST_CASE("lowest miniband against the dense-scan oracle") {
  const BandWindow w = find_band(reference_cell(), 1);
  CHECK(std::abs(w.e_low - testsupport::band1_low) < 1e-9);
  CHECK(std::abs(w.e_high - testsupport::band1_high) < 1e-9);
  CHECK(w.period == doctest::Approx(9.0));
  CHECK_FALSE(w.truncated_high);

  // defining condition at the polished edges
  for (double edge : {w.e_low, w.e_high})
    CHECK(std::abs(std::abs(unit_cell_matrix(edge, reference_cell()).a.real()) - 1.0) < 1e-9);
}

TEST_CASE("second miniband") {
  const BandWindow w = find_band(reference_cell(), 2);
  CHECK(std::abs(w.e_low - testsupport::band2_low) < 1e-9);
  CHECK(std::abs(w.e_high - testsupport::band2_high) < 1e-9);
}

TEST_CASE("free cell signals the gapless case") {
  CHECK_THROWS_AS(find_band(free_cell(), 1), free_medium_error);
}

TEST_CASE("absent band") {
  CHECK_THROWS_AS(find_band(reference_cell(), 1, {1e-6, 0.04, 1e-4}),
                  band_not_found_error);
  CHECK_THROWS_AS(find_band(reference_cell(), 0), std::invalid_argument);
}

TEST_CASE("Bloch wavenumber") {
  const UnitCell cell = reference_cell();
  const BandWindow w = find_band(cell, 1);
  const double d = w.period;

  SUBCASE("edges map to the zone boundary") {
    CHECK(bloch_q(w.e_low, w, cell) * d < 1e-4);   // Re a = +1 edge
    CHECK(std::abs(bloch_q(w.e_high, w, cell) * d - std::numbers::pi) < 1e-4);
  }
  SUBCASE("mid-band energy with Re a = 0 sits at q = pi/2d") {
    const double e3 = testsupport::resonance_energy[2];
    CHECK(std::abs(bloch_q(e3, w, cell) - std::numbers::pi / (2.0 * d)) < 1e-10);
  }
  SUBCASE("monotone across the band") {
    double prev = -1.0;
    for (int i = 1; i < 200; ++i) {
      const double e = w.e_low + (w.e_high - w.e_low) * i / 200.0;
      const double q = bloch_q(e, w, cell);
      CHECK(q > prev);
      prev = q;
    }
  }
  SUBCASE("defines the dispersion: cos(qd) = Re a") {
    for (int i = 1; i < 100; ++i) {
      const double e = w.e_low + (w.e_high - w.e_low) * i / 100.0;
      const DispersionPoint p = dispersion_point(e, w, cell);
      CHECK(p.band_index == 1);
      CHECK(p.q <= std::numbers::pi / d);
      CHECK(std::abs(std::cos(p.q * d) - unit_cell_matrix(e, cell).a.real()) < 1e-10);
    }
  }
  SUBCASE("out-of-band energies rejected") {
    CHECK_THROWS_AS(bloch_q(0.040, w, cell), out_of_band_error);
    CHECK_THROWS_AS(bloch_q(0.080, w, cell), out_of_band_error);
  }
}

TEST_CASE("group velocity") {
  const UnitCell cell = reference_cell();
  const BandWindow w = find_band(cell, 1);

  SUBCASE("agrees with the finite-difference inverse slope of q(E)") {
    for (double frac : {0.2, 0.45, 0.7, 0.9}) {
      const double e = w.e_low + (w.e_high - w.e_low) * frac;
      const double h = 1e-7;
      const double dq = (bloch_q(e + h, w, cell) - bloch_q(e - h, w, cell)) / (2.0 * h);
      const double expected = 1.0 / (constants::hbar * dq);
      const double got = group_velocity(e, w, cell).value;
      CHECK(std::abs(got - expected) / std::abs(expected) < 1e-6);
    }
  }
  SUBCASE("free cell recovers the free velocity") {
    const UnitCell cell0 = free_cell(9.0);
    const double e = 0.05;  // kd away from multiples of pi
    const BandWindow window{1, e - 1e-3, e + 1e-3, 9.0, false};
    const double v = group_velocity(e, window, cell0).value;
    CHECK(std::abs(v - free_velocity(wavevector_well(e, cell0), 0.072)) / v < 1e-8);
  }
  SUBCASE("flagged zero at the band edges") {
    CHECK(group_velocity(w.e_low, w, cell).at_band_edge);
    CHECK(group_velocity(w.e_low, w, cell).value == 0.0);
    CHECK_FALSE(group_velocity(0.06, w, cell).at_band_edge);
  }
  SUBCASE("decays monotonically into both edges") {
    const double width = w.e_high - w.e_low;
    double prev = 0.0;
    for (int i = 1; i <= 5; ++i) {  // marching toward the lower edge
      const double v = group_velocity(w.e_low + width * 0.01 * i / 5.0, w, cell).value;
      CHECK(v > prev);
      prev = v;
    }
    prev = 0.0;
    for (int i = 1; i <= 5; ++i) {
      const double v = group_velocity(w.e_high - width * 0.01 * i / 5.0, w, cell).value;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("analytic dispersion derivative matches Richardson differences") {
  const UnitCell cell = reference_cell();
  const BandWindow w = find_band(cell, 1);
  const auto re_a = [&](double e) { return unit_cell_matrix(e, cell).a.real(); };
  const auto im_a = [&](double e) { return unit_cell_matrix(e, cell).a.imag(); };
  for (int i = 1; i < 40; ++i) {
    const double e = w.e_low + (w.e_high - w.e_low) * i / 40.0;
    const double h = 1e-7;
    const auto [dre, dim] = cell_matrix_energy_derivative(e, cell);
    const double fd_re =
        (4.0 * (re_a(e + h / 2) - re_a(e - h / 2)) / h - (re_a(e + h) - re_a(e - h)) / (2 * h)) / 3.0;
    const double fd_im =
        (4.0 * (im_a(e + h / 2) - im_a(e - h / 2)) / h - (im_a(e + h) - im_a(e - h)) / (2 * h)) / 3.0;
    CHECK(std::abs(dre - fd_re) / std::abs(dre) < 1e-6);
    CHECK(std::abs(dim - fd_im) / std::abs(dim) < 1e-6);
  }
}

TEST_CASE("band orientation of the lowest miniband") {
  const UnitCell cell = reference_cell();
  CHECK(band_orientation(find_band(cell, 1), cell) == 1);
}

TEST_CASE("the second miniband is inverted") {
  // Re a runs from -1 up to +1 there, so q decreases with E and the signed
  // group velocity is negative
  const UnitCell cell = reference_cell();
  const BandWindow w = find_band(cell, 2);
  CHECK(band_orientation(w, cell) == -1);
  const double mid = 0.5 * (w.e_low + w.e_high);
  CHECK(group_velocity(mid, w, cell).value < 0.0);
  CHECK(bloch_q(w.e_low, w, cell) > bloch_q(w.e_high, w, cell));
}
