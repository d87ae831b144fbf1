#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fps/band.hpp"
#include "fps/bloch.hpp"
#include "fps/cell.hpp"
#include "fps/errors.hpp"
#include "fps/resonance.hpp"
#include "fps/scattering.hpp"
#include "fps/transfer.hpp"

namespace fps {

enum class Parameterize { energy, q };

struct SweepRange {
  Parameterize parameterize = Parameterize::energy;
  double min = 1e-4;   // eV, or 1/nm in q mode
  double max = 0.288;
  double step = 1e-4;
};

// Everything a run needs: the cell, the structure size, the sweep grid, and
// where to put the output. Defaults are the reference GaAs/AlGaAs
// superlattice: 2.5 nm / 288 meV barriers, 6.5 nm wells, m*/m0 = 0.072,
// six periods, lowest miniband.
struct SweepConfig {
  UnitCell cell{{{2.5, 0.288}, {6.5, 0.0}}, 0.072};
  int periods = 6;
  int band_index = 1;
  SweepRange sweep{};
  EnergyScan band_scan{};
  std::string output_path;             // empty: stdout
  double temperature_k = 4.0;          // metadata only; enters no formula
  std::map<std::string, double> tolerance_overrides;
};

inline SweepConfig default_config() { return {}; }

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline std::string cell_field(double v, bool present) {
  return present ? format_double(v) : std::string();
}

inline void check(bool ok, const std::string& what) {
  if (!ok) throw config_error("config: " + what);
}

}  // namespace detail

inline SweepConfig parse_config(const nlohmann::json& j) {
  SweepConfig cfg;
  try {
    if (j.contains("cell")) {
      const auto& jc = j.at("cell");
      if (jc.contains("effective_mass_ratio"))
        cfg.cell.effective_mass_ratio = jc.at("effective_mass_ratio").get<double>();
      if (jc.contains("layers")) {
        cfg.cell.layers.clear();
        for (const auto& jl : jc.at("layers"))
          cfg.cell.layers.push_back(
              {jl.at("width_nm").get<double>(), jl.at("potential_ev").get<double>()});
      }
    }
    if (j.contains("periods")) cfg.periods = j.at("periods").get<int>();
    if (j.contains("band_index")) cfg.band_index = j.at("band_index").get<int>();
    if (j.contains("sweep")) {
      const auto& js = j.at("sweep");
      if (js.contains("parameterize")) {
        const std::string p = js.at("parameterize").get<std::string>();
        detail::check(p == "energy" || p == "q",
                      "sweep.parameterize must be \"energy\" or \"q\"");
        cfg.sweep.parameterize = p == "energy" ? Parameterize::energy : Parameterize::q;
      }
      if (js.contains("min")) cfg.sweep.min = js.at("min").get<double>();
      if (js.contains("max")) cfg.sweep.max = js.at("max").get<double>();
      if (js.contains("step")) cfg.sweep.step = js.at("step").get<double>();
    }
    if (j.contains("band_scan")) {
      const auto& js = j.at("band_scan");
      if (js.contains("min")) cfg.band_scan.e_min = js.at("min").get<double>();
      if (js.contains("max")) cfg.band_scan.e_max = js.at("max").get<double>();
      if (js.contains("step")) cfg.band_scan.step = js.at("step").get<double>();
    }
    if (j.contains("output")) cfg.output_path = j.at("output").get<std::string>();
    if (j.contains("temperature_k")) cfg.temperature_k = j.at("temperature_k").get<double>();
    if (j.contains("tolerances"))
      for (const auto& [key, val] : j.at("tolerances").items())
        cfg.tolerance_overrides[key] = val.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }

  detail::check(!cfg.cell.layers.empty(), "cell.layers must not be empty");
  for (std::size_t i = 0; i < cfg.cell.layers.size(); ++i) {
    const std::string at = "cell.layers[" + std::to_string(i) + "].";
    detail::check(cfg.cell.layers[i].width_nm > 0.0, at + "width_nm must be > 0");
    detail::check(std::isfinite(cfg.cell.layers[i].potential_ev),
                  at + "potential_ev must be finite");
  }
  detail::check(cfg.cell.effective_mass_ratio > 0.0,
                "cell.effective_mass_ratio must be > 0");
  detail::check(cfg.periods >= 2, "periods must be >= 2");
  detail::check(cfg.band_index >= 1, "band_index must be >= 1");
  detail::check(cfg.sweep.step > 0.0, "sweep.step must be > 0");
  detail::check(cfg.sweep.min < cfg.sweep.max, "sweep.min must be < sweep.max");
  detail::check(cfg.band_scan.step > 0.0, "band_scan.step must be > 0");
  return cfg;
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config file not found: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config: parse failure in " + path + ": " + e.what());
  }
  return parse_config(j);
}

// One sweep row; in-band-only quantities are absent in gaps and at band
// edges, and the CSV writer emits them as empty fields.
struct SweepRow {
  double e;
  double re_a;
  double im_a;
  double t_n;
  double abs_t_unit;
  std::optional<double> q;
  std::optional<double> tilde_alpha_abs;
  std::optional<double> v_g;
  std::optional<double> v_res;
  std::optional<double> ratio;
  std::optional<double> tau_phase;
};

namespace detail {

inline SweepRow make_row(double e, const UnitCell& cell, int n) {
  const TransferMatrix m = unit_cell_matrix(e, cell);
  const double d = cell.period();
  const double x = m.a.real();
  const double s2 = 1.0 - x * x;

  SweepRow row;
  row.e = e;
  row.re_a = x;
  row.im_a = m.a.imag();
  row.t_n = transmission_chebyshev(m, n);
  row.abs_t_unit = 1.0 / std::abs(m.a);
  if (std::abs(s2) >= 1e-13) row.tau_phase = phase_time(e, cell, n);
  if (std::abs(x) <= 1.0 && s2 > 1e-13) {
    const double q = std::acos(x) / d;
    row.q = q;
    const int sign = m.a.imag() < 0.0 ? 1 : -1;
    const Complex xi = std::exp(Complex(0.0, sign * q * d));
    row.tilde_alpha_abs =
        std::abs((std::conj(m.a) - std::conj(m.b) - xi) / (m.a - m.b - xi));
    const double dre = cell_matrix_energy_derivative(e, cell).d_re_a;
    row.v_g = d * std::sqrt(s2) / (-dre) / constants::hbar;
    row.v_res = d * s2 / (m.a.imag() * dre) / constants::hbar;
    row.ratio = std::sqrt(s2) / std::abs(m.a.imag());
  }
  return row;
}

inline std::vector<double> grid_with(double lo, double hi, double step,
                                     std::vector<double> extra) {
  std::vector<double> xs;
  for (double x = lo; x <= hi + 1e-15; x += step) xs.push_back(std::min(x, hi));
  xs.insert(xs.end(), extra.begin(), extra.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-15; }),
           xs.end());
  return xs;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  validate(cfg.cell);
  const double d = cfg.cell.period();

  std::vector<ResonanceLevel> levels;
  try {
    levels = find_resonances(cfg.cell, cfg.periods, cfg.band_index, cfg.band_scan);
  } catch (const free_medium_error&) {
    // gapless cell: every energy is resonant, nothing discrete to mark
    if (cfg.sweep.parameterize == Parameterize::q) throw;
  }

  std::vector<SweepRow> rows;
  if (cfg.sweep.parameterize == Parameterize::energy) {
    std::vector<double> marks;
    for (const ResonanceLevel& l : levels)
      if (l.energy >= cfg.sweep.min && l.energy <= cfg.sweep.max)
        marks.push_back(l.energy);
    for (double e :
         detail::grid_with(std::max(cfg.sweep.min, 1e-9), cfg.sweep.max,
                           cfg.sweep.step, marks))
      rows.push_back(detail::make_row(e, cfg.cell, cfg.periods));
  } else {
    const BandWindow window = find_band(cfg.cell, cfg.band_index, cfg.band_scan);
    const double qmax = std::numbers::pi / d;
    const double lo = std::clamp(cfg.sweep.min, 0.0, qmax);
    const double hi = std::clamp(cfg.sweep.max, 0.0, qmax);
    std::vector<double> marks;
    for (const ResonanceLevel& l : levels)
      if (l.q >= lo && l.q <= hi) marks.push_back(l.q);
    const double x_lo = detail::re_a(window.e_low, cfg.cell);
    for (double q : detail::grid_with(lo, hi, cfg.sweep.step, marks)) {
      const double target = std::cos(q * d);
      // Re a is monotone across one band; bracket by the band edges
      double e;
      if (q <= 0.0)
        e = x_lo > 0.0 ? window.e_low : window.e_high;
      else if (q >= qmax)
        e = x_lo > 0.0 ? window.e_high : window.e_low;
      else
        e = find_root_bracketed(
            [&](double x) { return detail::re_a(x, cfg.cell) - target; },
            window.e_low, window.e_high);
      rows.push_back(detail::make_row(e, cfg.cell, cfg.periods));
    }
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "e_ev,q_per_nm,re_a,im_a,T_n,abs_t_unit,tilde_alpha_abs,"
      "v_g_nm_per_fs,v_res_nm_per_fs,v_ratio,tau_phase_fs\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string();
  };
  for (const SweepRow& r : rows) {
    out += detail::format_double(r.e) + ',' + opt(r.q) + ',' +
           detail::format_double(r.re_a) + ',' + detail::format_double(r.im_a) +
           ',' + detail::format_double(r.t_n) + ',' +
           detail::format_double(r.abs_t_unit) + ',' + opt(r.tilde_alpha_abs) +
           ',' + opt(r.v_g) + ',' + opt(r.v_res) + ',' + opt(r.ratio) + ',' +
           opt(r.tau_phase) + '\n';
  }
  return out;
}

inline std::string run_sweep_csv(const SweepConfig& cfg) {
  return sweep_csv(run_sweep(cfg));
}

// Per-level table: times, velocities and amplitudes at every resonance.
inline std::string resonance_table_csv(const SweepConfig& cfg) {
  const auto levels = find_resonances(cfg.cell, cfg.periods, cfg.band_index, cfg.band_scan);
  const BandWindow window = find_band(cfg.cell, cfg.band_index, cfg.band_scan);
  std::string out =
      "band,j,n,e_ev,q_per_nm,T_n,abs_t_unit,tau_phase_fs,tau_res_fs,"
      "tau_dwell_fs,v_g_nm_per_fs,v_res_nm_per_fs,v_ratio\n";
  for (const ResonanceLevel& l : levels) {
    const TimeReport tr = time_report(l, cfg.cell);
    const TransferMatrix m = unit_cell_matrix(l.energy, cfg.cell);
    using detail::format_double;
    out += std::to_string(l.band_index) + ',' + std::to_string(l.j) + ',' +
           std::to_string(l.periods) + ',' + format_double(l.energy) + ',' +
           format_double(l.q) + ',' +
           format_double(transmission_chebyshev(m, l.periods)) + ',' +
           format_double(1.0 / std::abs(m.a)) + ',' + format_double(tr.tau_phase) +
           ',' + format_double(tr.tau_res) + ',' + format_double(tr.tau_dwell) +
           ',' + format_double(group_velocity(l.energy, window, cfg.cell).value) +
           ',' + format_double(resonant_velocity(l, cfg.cell)) + ',' +
           format_double(velocity_ratio(l.energy, window, cfg.cell).value) + '\n';
  }
  return out;
}

namespace detail {

inline std::string state_csv(const ScatteringState& st, int per_layer = 64) {
  std::string out = "x_nm,re_psi,im_psi,abs2_psi,current\n";
  for (const WaveSample& s : st.samples(per_layer)) {
    const double cur = hbar_over_mass(st.mass_ratio) *
                       std::imag(std::conj(s.psi) * s.dpsi);
    out += format_double(s.x) + ',' + format_double(s.psi.real()) + ',' +
           format_double(s.psi.imag()) + ',' + format_double(std::norm(s.psi)) +
           ',' + format_double(cur) + '\n';
  }
  return out;
}

}  // namespace detail

// Wave-function dump at the j-th resonance of the configured structure.
inline std::string wavefunction_csv(const SweepConfig& cfg, int j) {
  const auto levels = find_resonances(cfg.cell, cfg.periods, cfg.band_index, cfg.band_scan);
  const auto it = std::find_if(levels.begin(), levels.end(),
                               [&](const ResonanceLevel& l) { return l.j == j; });
  if (it == levels.end())
    throw config_error("wavefunction: unknown level j = " + std::to_string(j) +
                       "; available j: 1.." + std::to_string(cfg.periods - 1));
  return detail::state_csv(scattering_state(it->energy, cfg.cell, cfg.periods));
}

// Wave-function dump at an arbitrary energy (any E is resonant for a gapless
// cell, so no level selection applies there).
inline std::string wavefunction_csv_at(const SweepConfig& cfg, double energy) {
  return detail::state_csv(scattering_state(energy, cfg.cell, cfg.periods));
}

}  // namespace fps
