#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fps/fps.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<int> n;
  std::optional<int> band;
  std::optional<std::string> parameterize;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file (defaults to the reference superlattice)");
  cmd->add_option("--out", opt.out_path, "output file (default: config's output, else stdout)");
  cmd->add_option("--n", opt.n, "number of periods override");
  cmd->add_option("--band", opt.band, "band index override");
  cmd->add_option("--parameterize", opt.parameterize, "sweep variable: energy | q")
      ->check(CLI::IsMember({"energy", "q"}));
}

fps::SweepConfig resolve(const CommonOptions& opt) {
  fps::SweepConfig cfg = opt.config_path.empty() ? fps::default_config()
                                                 : fps::load_config(opt.config_path);
  if (opt.n) cfg.periods = *opt.n;
  if (opt.band) cfg.band_index = *opt.band;
  if (opt.parameterize)
    cfg.sweep.parameterize = *opt.parameterize == "q" ? fps::Parameterize::q
                                                      : fps::Parameterize::energy;
  if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
  if (cfg.periods < 2) throw fps::config_error("config: periods must be >= 2");
  if (cfg.band_index < 1) throw fps::config_error("config: band_index must be >= 1");
  return cfg;
}

void emit(const fps::SweepConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + cfg.output_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Transfer-matrix toolkit for coherent resonant tunneling in 1D finite "
      "periodic potentials"};
  app.require_subcommand(1);

  CommonOptions sweep_opt, res_opt, wf_opt, verify_opt;
  int level_j = 0;
  std::optional<double> wf_energy;

  CLI::App* sweep = app.add_subcommand("sweep", "energy or q sweep of the band/transport quantities (CSV)");
  add_common(sweep, sweep_opt);

  CLI::App* resonances = app.add_subcommand("resonances", "table of the transmission-unity levels (CSV)");
  add_common(resonances, res_opt);

  CLI::App* wavefunction = app.add_subcommand("wavefunction", "wave function dump at a resonance (CSV)");
  add_common(wavefunction, wf_opt);
  wavefunction->add_option("--j", level_j, "resonance index (1..n-1)");
  wavefunction->add_option("--energy", wf_energy, "dump at this energy [eV] instead of a level");

  CLI::App* verify = app.add_subcommand("verify", "run the full identity battery; exit 0 iff all pass");
  add_common(verify, verify_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const fps::SweepConfig cfg = resolve(sweep_opt);
      emit(cfg, fps::run_sweep_csv(cfg));
    } else if (resonances->parsed()) {
      const fps::SweepConfig cfg = resolve(res_opt);
      emit(cfg, fps::resonance_table_csv(cfg));
    } else if (wavefunction->parsed()) {
      const fps::SweepConfig cfg = resolve(wf_opt);
      if (!wf_energy && level_j == 0)
        throw fps::config_error("wavefunction: give --j or --energy");
      emit(cfg, wf_energy ? fps::wavefunction_csv_at(cfg, *wf_energy)
                          : fps::wavefunction_csv(cfg, level_j));
    } else if (verify->parsed()) {
      const fps::SweepConfig cfg = resolve(verify_opt);
      const fps::VerifyReport report = fps::run_full_verification(cfg);
      fps::print_report(std::cout, report);
      return report.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
