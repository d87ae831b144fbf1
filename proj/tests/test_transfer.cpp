#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fps/transfer.hpp"
#include "fps/verify.hpp"
#include "fps/wavevectors.hpp"
#include "support.hpp"

using namespace fps;
using testsupport::free_cell;
using testsupport::reference_cell;

namespace {

TransferMatrix random_det1_matrix(std::mt19937& rng) {
  std::uniform_real_distribution<double> mag(0.0, 2.0), phase(0.0, 2.0 * std::numbers::pi);
  const double r = mag(rng);
  return {std::polar(std::cosh(r), phase(rng)), std::polar(std::sinh(r), phase(rng))};
}

}  // namespace

TEST_CASE("free cell propagates with a = exp(-ikd), b = 0") {
  const UnitCell cell = free_cell(9.0);
  for (double e : {0.013, 0.06, 0.25}) {
    const double k = wavevector_well(e, cell);
    const TransferMatrix m = unit_cell_matrix(e, cell);
    CHECK(std::abs(m.a - std::exp(Complex(0.0, -k * 9.0))) < 1e-14);
    CHECK(std::abs(m.b) < 1e-14);
    CHECK(std::abs(transmission_amplitude(m) - std::exp(Complex(0.0, k * 9.0))) < 1e-13);
    CHECK(std::abs(reflection_amplitude(m)) < 1e-14);
  }
}

TEST_CASE("non-positive energy rejected") {
  CHECK_THROWS_AS(unit_cell_matrix(0.0, reference_cell()), std::domain_error);
  CHECK_THROWS_AS(unit_cell_matrix(-0.05, reference_cell()), std::domain_error);
}

TEST_CASE("closed-form elements at E = 50 meV match the script oracle") {
  const TransferMatrix m = unit_cell_matrix(0.050, reference_cell());
  CHECK(std::abs(m.a - testsupport::a_at_50mev) < 1e-12);
  CHECK(std::abs(m.b - testsupport::b_at_50mev) < 1e-12);
}

TEST_CASE("closed form agrees with interface/propagation composition") {
  const UnitCell cell = reference_cell();
  for (int i = 1; i <= 60; ++i) {
    const double e = 0.6 * i / 60.0;  // spans below, at and above the barrier
    const TransferMatrix cf = barrier_well_cell_matrix(e, cell);
    const TransferMatrix gp = composed_cell_matrix(e, cell);
    const double scale = std::abs(cf.a) + std::abs(cf.b);
    CHECK(std::abs(cf.a - gp.a) / scale < 1e-13);
    CHECK(std::abs(cf.b - gp.b) / scale < 1e-13);
  }
}

TEST_CASE("splitting layers leaves the cell matrix invariant") {
  // the reference cell re-expressed as four layers must compose to the same
  // matrix the closed form gives
  const UnitCell split{
      {{1.0, 0.288}, {1.5, 0.288}, {2.0, 0.0}, {4.5, 0.0}}, 0.072};
  const UnitCell cell = reference_cell();
  for (double e : {0.02, 0.055, 0.288, 0.4}) {
    const TransferMatrix a = unit_cell_matrix(e, split);
    const TransferMatrix b = unit_cell_matrix(e, cell);
    const double scale = std::abs(b.a) + std::abs(b.b);
    CHECK(std::abs(a.a - b.a) / scale < 1e-12);
    CHECK(std::abs(a.b - b.b) / scale < 1e-12);
  }
}

TEST_CASE("asymmetric three-layer stacks stay flux-conserving") {
  const UnitCell stack{{{1.3, 0.31}, {4.2, 0.0}, {2.1, 0.12}}, 0.067};
  for (int i = 1; i <= 200; ++i) {
    const double e = 0.5 * i / 200.0;
    const TransferMatrix m = unit_cell_matrix(e, stack);
    const double scale = std::max(1.0, std::norm(m.a));
    CHECK(std::abs(determinant_residual(m)) / scale < 1e-12);
    CHECK(std::abs(m.a) >= 1.0 - 1e-12);
    const NPeriodMatrix mn = nth_power_chebyshev(m, 5);
    CHECK(std::abs(std::norm(transmission_amplitude(mn)) +
                   std::norm(reflection_amplitude(mn)) - 1.0) < 1e-12);
  }
}

TEST_CASE("determinant invariance across the sweep") {
  const UnitCell cell = reference_cell();
  for (int i = 1; i <= 1000; ++i) {
    const double e = 0.288 * i / 1000.0;
    const TransferMatrix m = unit_cell_matrix(e, cell);
    // scaled by |a|^2: the matrix elements grow like 1/k toward E -> 0 and
    // the representation noise of the identity grows with them
    const double scale = std::max({1.0, std::norm(m.a), std::norm(m.b)});
    CHECK(std::abs(determinant_residual(m)) / scale < 1e-12);
    CHECK(std::abs(m.a) >= 1.0 - 1e-12);
  }
}

TEST_CASE("composition algebra") {
  std::mt19937 rng(99);
  SUBCASE("identity and inverse") {
    const TransferMatrix m = random_det1_matrix(rng);
    const TransferMatrix id;
    CHECK(std::abs(compose(m, id).a - m.a) < 1e-15);
    CHECK(std::abs(compose(id, m).b - m.b) < 1e-15);
    const TransferMatrix unit = compose(m, inverse(m));
    CHECK(std::abs(unit.a - 1.0) < 1e-13);
    CHECK(std::abs(unit.b) < 1e-13);
  }
  SUBCASE("associativity") {
    for (int trial = 0; trial < 20; ++trial) {
      const TransferMatrix m1 = random_det1_matrix(rng);
      const TransferMatrix m2 = random_det1_matrix(rng);
      const TransferMatrix m3 = random_det1_matrix(rng);
      const TransferMatrix left = compose(compose(m1, m2), m3);
      const TransferMatrix right = compose(m1, compose(m2, m3));
      const double scale = std::abs(left.a) + std::abs(left.b);
      CHECK(std::abs(left.a - right.a) / scale < 1e-13);
      CHECK(std::abs(left.b - right.b) / scale < 1e-13);
    }
  }
  SUBCASE("determinant preserved") {
    for (int trial = 0; trial < 20; ++trial) {
      const TransferMatrix m = compose(random_det1_matrix(rng), random_det1_matrix(rng));
      CHECK(std::abs(determinant_residual(m)) < 1e-11);
    }
  }
}

TEST_CASE("Chebyshev matrix power") {
  const UnitCell cell = reference_cell();

  SUBCASE("n = 1 is the matrix itself") {
    const TransferMatrix m = unit_cell_matrix(0.06, cell);
    const NPeriodMatrix p = nth_power_chebyshev(m, 1);
    CHECK(p.a == m.a);
    CHECK(p.b == m.b);
    CHECK_THROWS_AS(nth_power_chebyshev(m, 0), std::invalid_argument);
  }
  SUBCASE("n = 6 at 60 meV against the direct product") {
    const TransferMatrix m = unit_cell_matrix(0.060, cell);
    const NPeriodMatrix fast = nth_power_chebyshev(m, 6);
    const NPeriodMatrix ref = repeated_product_power(m, 6);
    CHECK(std::abs(fast.a - ref.a) / std::abs(ref.a) < 1e-10);
    CHECK(std::abs(fast.b - ref.b) / std::abs(ref.b) < 1e-10);
  }
  SUBCASE("n = 1..50 over random energies") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> energy(1e-3, 0.287);
    for (int trial = 0; trial < 30; ++trial) {
      const TransferMatrix m = unit_cell_matrix(energy(rng), cell);
      for (int n : {1, 2, 3, 7, 20, 50}) {
        const NPeriodMatrix fast = nth_power_chebyshev(m, n);
        const NPeriodMatrix ref = repeated_product_power(m, n);
        const double scale = std::max({std::abs(ref.a), std::abs(ref.b), 1.0});
        CHECK(std::abs(fast.a - ref.a) / scale < 1e-9);
        CHECK(std::abs(fast.b - ref.b) / scale < 1e-9);
        CHECK(std::abs(determinant_residual(fast)) / (scale * scale) < 1e-12);
      }
    }
  }
  SUBCASE("powers compose: M^(m+k) = M^m M^k") {
    for (double e : {0.02, 0.055, 0.12, 0.3}) {  // gaps and bands
      const TransferMatrix m = unit_cell_matrix(e, cell);
      for (auto [p, q] : {std::pair{3, 4}, std::pair{1, 9}, std::pair{11, 14}}) {
        const NPeriodMatrix mp = nth_power_chebyshev(m, p);
        const NPeriodMatrix mq = nth_power_chebyshev(m, q);
        const TransferMatrix prod = compose({mp.a, mp.b}, {mq.a, mq.b});
        const NPeriodMatrix whole = nth_power_chebyshev(m, p + q);
        const double scale = std::max({std::abs(whole.a), std::abs(whole.b), 1.0});
        CHECK(std::abs(prod.a - whole.a) / scale < 1e-12);
        CHECK(std::abs(prod.b - whole.b) / scale < 1e-12);
      }
    }
  }
  SUBCASE("b^(n) vanishes where Re a = cos(j pi/n)") {
    for (int j = 1; j <= 5; ++j) {
      const TransferMatrix m = unit_cell_matrix(testsupport::resonance_energy[j - 1], cell);
      CHECK(std::abs(m.a.real() - std::cos(j * std::numbers::pi / 6.0)) < 1e-9);
      CHECK(std::abs(nth_power_chebyshev(m, 6).b) < 1e-8);
    }
  }
}

TEST_CASE("transmission") {
  const UnitCell cell = reference_cell();

  SUBCASE("free cell is transparent at every energy") {
    for (double e : {0.01, 0.1, 0.28})
      CHECK(transmission(nth_power_chebyshev(unit_cell_matrix(e, free_cell()), 6)) ==
            doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("unity at the six-period resonances") {
    for (double e : testsupport::resonance_energy)
      CHECK(transmission(nth_power_chebyshev(unit_cell_matrix(e, cell), 6)) >=
            1.0 - 1e-10);
  }
  SUBCASE("|a|^-2 form equals the Chebyshev form") {
    for (int i = 1; i <= 500; ++i) {
      const double e = 0.288 * i / 500.0;
      const TransferMatrix m = unit_cell_matrix(e, cell);
      const double t1 = transmission(nth_power_chebyshev(m, 6));
      const double t2 = transmission_chebyshev(m, 6);
      CHECK(std::abs(t1 - t2) < 1e-12);
    }
  }
  SUBCASE("value at 55 meV against the direct product") {
    const TransferMatrix m = unit_cell_matrix(0.055, cell);
    const double direct = 1.0 / std::norm(repeated_product_power(m, 6).a);
    CHECK(transmission(nth_power_chebyshev(m, 6)) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("transmission and reflection amplitudes") {
  const UnitCell cell = reference_cell();

  SUBCASE("t^(6) = (-1)^j at the resonances") {
    for (int j = 1; j <= 5; ++j) {
      const NPeriodMatrix mn =
          nth_power_chebyshev(unit_cell_matrix(testsupport::resonance_energy[j - 1], cell), 6);
      const Complex expected = (j % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(transmission_amplitude(mn) - expected) < 1e-8);
    }
  }
  SUBCASE("flux unitarity on a 1000-point sweep") {
    for (int i = 1; i <= 1000; ++i) {
      const double e = 0.288 * i / 1000.0;
      const NPeriodMatrix mn = nth_power_chebyshev(unit_cell_matrix(e, cell), 6);
      const double flux = std::norm(transmission_amplitude(mn)) +
                          std::norm(reflection_amplitude(mn));
      CHECK(std::abs(flux - 1.0) < 1e-12);
    }
  }
}
