#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fps/band.hpp"
#include "fps/bloch.hpp"
#include "fps/resonance.hpp"
#include "fps/scattering.hpp"
#include "fps/sweep.hpp"
#include "fps/transfer.hpp"

namespace fps {

struct CheckResult {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  }
};

// n-fold product by repeated composition; the reference the Chebyshev power
// is checked against.
inline NPeriodMatrix repeated_product_power(const TransferMatrix& m, int n) {
  TransferMatrix acc;  // identity
  for (int i = 0; i < n; ++i) acc = compose(acc, m);
  return {acc.a, acc.b, n};
}

namespace detail {

inline double component_rel_error(Complex got, Complex ref, double scale) {
  return std::abs(got - ref) / std::max(std::abs(ref), 1e-12 * scale);
}

inline bool is_reference_cell(const UnitCell& c) {
  return c.layers.size() == 2 && std::abs(c.layers[0].width_nm - 2.5) < 1e-12 &&
         std::abs(c.layers[0].potential_ev - 0.288) < 1e-12 &&
         std::abs(c.layers[1].width_nm - 6.5) < 1e-12 &&
         c.layers[1].potential_ev == 0.0 &&
         std::abs(c.effective_mass_ratio - 0.072) < 1e-12;
}

}  // namespace detail

// The full identity battery: determinant invariance, Chebyshev powers against
// brute-force products, resonance structure, coincidence of the time
// definitions, the velocity equivalences and bounds, the Bloch-decomposition
// identities, and current conservation. Tolerances can be overridden per
// check through the config.
inline VerifyReport run_full_verification(const SweepConfig& cfg) {
  VerifyReport report;
  const auto tol_of = [&](const std::string& name, double def) {
    const auto it = cfg.tolerance_overrides.find(name);
    return it == cfg.tolerance_overrides.end() ? def : it->second;
  };
  const auto push = [&](const std::string& name, double residual, double def_tol) {
    const double tol = tol_of(name, def_tol);
    report.checks.push_back({name, residual, tol, residual <= tol});
  };
  const auto fail = [&](const std::string& name, double def_tol, const char* what) {
    report.checks.push_back({name + " [" + what + "]",
                             std::numeric_limits<double>::infinity(),
                             tol_of(name, def_tol), false});
  };
  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  const UnitCell& cell = cfg.cell;
  const int n = cfg.periods;
  const double e_max = cfg.sweep.parameterize == Parameterize::energy
                           ? cfg.sweep.max
                           : cfg.band_scan.e_max;

  // Determinant invariance over a 10000-point sweep. The residual is scaled
  // by max(1, |a|^2): toward E -> 0 the matrix elements grow to O(100) and
  // the absolute identity saturates at the double representation noise
  // eps |a|^2, so the scaled residual is the meaningful measure there (and is
  // the plain absolute residual everywhere the matrix is O(1)).
  try {
    const auto t0 = clock::now();
    double worst = 0.0;
    for (int i = 1; i <= 10000; ++i) {
      const double e = i * e_max / 10000.0;
      const TransferMatrix m = unit_cell_matrix(e, cell);
      const double scale = std::max({1.0, std::norm(m.a), std::norm(m.b)});
      worst = std::max(worst, std::abs(determinant_residual(m)) / scale);
    }
    push("det-invariance", worst, 1e-12);
    push("det-invariance-runtime", seconds(t0), 1.0);
  } catch (const std::exception& e) {
    fail("det-invariance", 1e-12, e.what());
  }

  // Chebyshev matrix powers against direct products, n = 2..50
  try {
    const auto t0 = clock::now();
    std::mt19937 rng(7321);
    std::uniform_real_distribution<double> energy(1e-4, e_max);
    std::vector<double> energies(100);
    for (double& e : energies) e = energy(rng);
    double worst = 0.0;
    for (int p = 2; p <= 50; ++p)
      for (double e : energies) {
        const TransferMatrix m = unit_cell_matrix(e, cell);
        const NPeriodMatrix fast = nth_power_chebyshev(m, p);
        const NPeriodMatrix ref = repeated_product_power(m, p);
        const double scale = std::max({std::abs(ref.a), std::abs(ref.b), 1.0});
        worst = std::max({worst, detail::component_rel_error(fast.a, ref.a, scale),
                          detail::component_rel_error(fast.b, ref.b, scale)});
      }
    push("chebyshev-power-vs-product", worst, 1e-9);
    push("chebyshev-power-runtime", seconds(t0), 5.0);
  } catch (const std::exception& e) {
    fail("chebyshev-power-vs-product", 1e-9, e.what());
  }

  std::vector<ResonanceLevel> levels;
  BandWindow window;
  try {
    window = find_band(cell, cfg.band_index, cfg.band_scan);
    levels = find_resonances(cell, n, cfg.band_index, cfg.band_scan);

    push("resonance-count", std::abs(double(levels.size()) - (n - 1)), 0.0);
    double worst_t = 0.0, worst_sign = 0.0;
    for (const ResonanceLevel& l : levels) {
      const NPeriodMatrix mn = nth_power_chebyshev(unit_cell_matrix(l.energy, cell), n);
      worst_t = std::max(worst_t, 1.0 - transmission(mn));
      worst_sign = std::max(worst_sign, std::abs(transmission_amplitude(mn) -
                                                 Complex((l.j % 2 == 0) ? 1.0 : -1.0)));
    }
    push("resonance-transmission", worst_t, 1e-10);
    push("resonance-amplitude-sign", worst_sign, 1e-8);
  } catch (const std::exception& e) {
    fail("resonance-structure", 0.0, e.what());
  }

  // coincidence of the time definitions at every resonance
  try {
    double dwell_dev = 0.0, te_imag = 0.0, tv_dev = 0.0;
    for (const ResonanceLevel& l : levels) {
      const TimeReport tr = time_report(l, cell);
      dwell_dev = std::max(dwell_dev, std::abs(tr.tau_phase - tr.tau_dwell) / tr.tau_phase);
      te_imag = std::max(te_imag, std::abs(tr.tau_te.imag() / tr.tau_te.real()));
      tv_dev = std::max(tv_dev, std::abs(tr.tau_tv.real() - tr.tau_phase) / tr.tau_phase);
    }
    push("time-coincidence-dwell", dwell_dev, 1e-8);
    push("time-coincidence-imag-te", te_imag, 1e-5);
    push("time-coincidence-tv", tv_dev, 1e-4);
  } catch (const std::exception& e) {
    fail("time-coincidence", 1e-8, e.what());
  }

  // three-way velocity equivalence
  try {
    double worst = 0.0;
    for (const ResonanceLevel& l : levels) {
      const double v1 = n * cell.period() / resonant_time(l, cell);
      const double v2 = resonant_velocity(l, cell);
      const ScatteringState st = scattering_state(l.energy, cell, n);
      const double v3 = velocity_expectation(st, window, cell).quadrature;
      worst = std::max({worst, std::abs(v1 - v2) / v2, std::abs(v1 - v3) / v3,
                        std::abs(v2 - v3) / v3});
    }
    push("velocity-equivalence", worst, 1e-7);
  } catch (const std::exception& e) {
    fail("velocity-equivalence", 1e-7, e.what());
  }

  // v_res <= |t| |v_g| for n = 2..12, equality at q = pi/2d
  try {
    double bound_dev = -std::numeric_limits<double>::infinity();
    double equality_dev = 0.0;
    for (int p = 2; p <= 12; ++p)
      for (const ResonanceLevel& l : find_resonances(cell, p, cfg.band_index, cfg.band_scan)) {
        const double vres = resonant_velocity(l, cell);
        const double bound = (1.0 / std::abs(unit_cell_matrix(l.energy, cell).a)) *
                             std::abs(group_velocity(l.energy, window, cell).value);
        bound_dev = std::max(bound_dev, (vres - bound) / bound);
        if (2 * l.j == p) equality_dev = std::max(equality_dev, std::abs(vres - bound) / bound);
      }
    push("velocity-bound", bound_dev, 1e-9);
    push("velocity-bound-equality", equality_dev, 1e-9);
  } catch (const std::exception& e) {
    fail("velocity-bound", 1e-9, e.what());
  }

  // reference-structure claims: where the velocity maxima sit, and the ratio
  // staying below one third
  if (detail::is_reference_cell(cell) && n == 6 && levels.size() == 5) {
    try {
      std::size_t arg_vg = 0, arg_vres = 0;
      double best_vg = 0.0, best_vres = 0.0;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const double vg = std::abs(group_velocity(levels[i].energy, window, cell).value);
        const double vr = resonant_velocity(levels[i], cell);
        if (vg > best_vg) { best_vg = vg; arg_vg = i; }
        if (vr > best_vres) { best_vres = vr; arg_vres = i; }
      }
      push("velocity-maxima",
           (levels[arg_vg].j == 4 && levels[arg_vres].j == 3) ? 0.0 : 1.0, 0.5);
    } catch (const std::exception& e) {
      fail("velocity-maxima", 0.5, e.what());
    }
  }
  if (detail::is_reference_cell(cell)) {
    try {
      double worst = 0.0;
      for (int i = 1; i < 2000; ++i) {
        const double e = window.e_low + (window.e_high - window.e_low) * i / 2000.0;
        worst = std::max(worst, velocity_ratio(e, window, cell).value);
      }
      push("velocity-ratio-bound", worst, 1.0 / 3.0);
    } catch (const std::exception& e) {
      fail("velocity-ratio-bound", 1.0 / 3.0, e.what());
    }
  }

  // Bloch-decomposition identities
  try {
    double n_dev = 0.0;
    for (const ResonanceLevel& l : levels) {
      const double ref = std::abs(tilde_alpha(l.energy, cell, 2, window));
      for (int p : {3, 6, 12})
        n_dev = std::max(n_dev,
                         std::abs(std::abs(tilde_alpha(l.energy, cell, p, window)) - ref));
    }
    push("bloch-alpha-n-independence", n_dev, 1e-10);

    const double edge_dev =
        std::max(1.0 - std::abs(tilde_alpha(window.e_low, cell, n, window)),
                 1.0 - std::abs(tilde_alpha(window.e_high, cell, n, window)));
    push("bloch-alpha-band-edges", edge_dev, 1e-5);

    double closed_dev = 0.0;
    for (int i = 1; i < 500; ++i) {
      const double e = window.e_low + (window.e_high - window.e_low) * i / 500.0;
      closed_dev = std::max(closed_dev,
                            std::abs(std::norm(tilde_alpha(e, cell, n, window)) -
                                     tilde_alpha_abs2_closed_form(e, window, cell)));
    }
    push("bloch-alpha-closed-form", closed_dev, 1e-10);

    double cross_dev = 0.0;
    for (const ResonanceLevel& l : levels) {
      const ScatteringState st = scattering_state(l.energy, cell, n);
      const BlochDecomposition dec = bloch_coefficients(st, window, cell);
      const AppendixChecks ac = appendix_integral_checks(st, dec);
      cross_dev = std::max({cross_dev, ac.velocity_cross_rel, ac.density_cross_rel});
    }
    push("bloch-appendix-integrals", cross_dev, 1e-8);
  } catch (const std::exception& e) {
    fail("bloch-identities", 1e-8, e.what());
  }

  // current constancy and the boundary identity <psi|v P|psi> = j_in L
  try {
    double current_dev = 0.0, boundary_dev = 0.0;
    for (const ResonanceLevel& l : levels) {
      const ScatteringState st = scattering_state(l.energy, cell, n);
      const auto samples = st.samples();
      std::vector<double> js;
      js.reserve(samples.size());
      for (const WaveSample& s : samples)
        js.push_back(hbar_over_mass(st.mass_ratio) *
                     std::imag(std::conj(s.psi) * s.dpsi));
      double mean = 0.0;
      for (double j : js) mean += j;
      mean /= js.size();
      double var = 0.0;  // two-pass; j is near-constant
      for (double j : js) var += (j - mean) * (j - mean);
      var /= js.size();
      current_dev = std::max(current_dev, std::sqrt(var) / std::abs(mean));
      const Complex num = velocity_expectation(st, window, cell).numerator;
      const double ref = st.incident_current * st.length;
      boundary_dev = std::max(boundary_dev, std::abs(num - ref) / ref);
    }
    push("current-conservation", current_dev, 1e-8);
    push("boundary-identity", boundary_dev, 1e-7);
  } catch (const std::exception& e) {
    fail("current-conservation", 1e-8, e.what());
  }

  return report;
}

inline void print_report(std::ostream& os, const VerifyReport& report) {
  for (const CheckResult& c : report.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << c.name
       << " residual " << std::scientific << std::setprecision(3) << c.residual
       << "  tol " << c.tolerance << std::defaultfloat << '\n';
  }
  os << (report.all_pass() ? "all checks passed" : "CHECKS FAILED") << '\n';
}

}  // namespace fps
