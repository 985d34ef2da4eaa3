#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <spmex/spmex.hpp>

namespace {

spmex::ObserverMode parse_mode(const std::string& s) {
  if (s == "v+exp") return spmex::ObserverMode::VPlusExp;
  if (s == "v-only") return spmex::ObserverMode::VOnly;
  throw CLI::ValidationError("--mode", "must be 'v+exp' or 'v-only'");
}

std::vector<std::pair<double, double>> load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open current profile: " + path);
  std::vector<std::pair<double, double>> profile;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    double t, I;
    if (line.empty() || line[0] == '#') continue;
    if (!(ss >> t >> I))
      throw std::runtime_error("bad profile line '" + line + "' in " + path);
    profile.emplace_back(t, I);
  }
  return profile;
}

void print_report(const spmex::RmspeReport& rep) {
  std::printf("RMSPE (%%) over t >= %.0f s\n", rep.t_start);
  std::printf("  c_ss_neg   %10.4f\n", rep.css_neg);
  std::printf("  c_avg_neg  %10.4f\n", rep.csavg_neg);
  std::printf("  c_ss_pos   %10.4f\n", rep.css_pos);
  std::printf("  c_avg_pos  %10.4f\n", rep.csavg_pos);
}

struct ScenarioFlags {
  std::string params_path;
  std::string scenario = "cc";
  std::string profile_path;
  double c_rate = 1.0;
  double duration = 3600;
  double soc0 = 0.05;
  double obs_soc0 = 0.10;
  double drift_x100 = 1.0, drift_y0 = 1.0, drift_eps_neg = 1.0;
  double sigma_v = 1e-3, sigma_dt = 1e-6;
  std::uint64_t seed = 42;
  double dt = 0.5;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--params", f.params_path, "cell parameter file (JSON)")->required();
  cmd->add_option("--scenario", f.scenario, "cc | profile")->default_val("cc");
  cmd->add_option("--profile", f.profile_path,
                  "current profile file with 't_s I_A' lines (scenario 'profile')");
  cmd->add_option("--c-rate", f.c_rate, "constant-current rate in multiples of 1C");
  cmd->add_option("--duration", f.duration, "simulated time [s]");
  cmd->add_option("--soc0", f.soc0, "plant initial state of charge");
  cmd->add_option("--obs-soc0", f.obs_soc0, "observer initial state of charge");
  cmd->add_option("--drift-x100", f.drift_x100, "plant-only multiplier on x100");
  cmd->add_option("--drift-y0", f.drift_y0, "plant-only multiplier on y0");
  cmd->add_option("--drift-eps-neg", f.drift_eps_neg,
                  "plant-only multiplier on the negative active-material fraction");
  cmd->add_option("--sigma-v", f.sigma_v, "voltage noise standard deviation [V]");
  cmd->add_option("--sigma-dt", f.sigma_dt, "expansion noise standard deviation [m]");
  cmd->add_option("--seed", f.seed, "noise generator seed");
  cmd->add_option("--dt", f.dt, "solver step [s]");
}

spmex::ScenarioConfig to_config(const ScenarioFlags& f) {
  spmex::ScenarioConfig cfg;
  if (f.scenario == "cc") {
    cfg.kind = spmex::ScenarioConfig::Kind::CcCharge;
  } else if (f.scenario == "profile") {
    cfg.kind = spmex::ScenarioConfig::Kind::CustomProfile;
    cfg.profile = load_profile(f.profile_path);
  } else {
    throw std::runtime_error("unknown scenario '" + f.scenario + "' (use cc or profile)");
  }
  cfg.c_rate = f.c_rate;
  cfg.duration = f.duration;
  cfg.soc0_plant = f.soc0;
  cfg.soc0_observer = f.obs_soc0;
  cfg.drift.scale_x100 = f.drift_x100;
  cfg.drift.scale_y0 = f.drift_y0;
  cfg.drift.scale_eps_s_neg = f.drift_eps_neg;
  cfg.noise.sigma_v = f.sigma_v;
  cfg.noise.sigma_dt = f.sigma_dt;
  cfg.noise.seed = f.seed;
  cfg.dt = f.dt;
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPMe battery simulator with a voltage+expansion observer cascade"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run one scenario and write a CSV");
  ScenarioFlags sf;
  std::string mode_str = "v+exp";
  std::string out_path = "run.csv";
  std::string plot_path;
  add_scenario_flags(sim, sf);
  sim->add_option("--mode", mode_str, "v+exp | v-only")->default_val("v+exp");
  sim->add_option("--out", out_path, "output CSV path")->default_val("run.csv");
  sim->add_option("--plotdata", plot_path, "also write panel-grouped plot data here");

  auto* rep = app.add_subcommand("report", "print the RMSPE table for an existing CSV");
  std::string in_path;
  double t_start = 300;
  rep->add_option("--in", in_path, "input CSV from simulate")->required();
  rep->add_option("--t-start", t_start, "start of the evaluation window [s]");

  auto* cmp = app.add_subcommand("compare",
                                 "run both observer modes on one measurement stream");
  ScenarioFlags cf;
  std::string out_prefix;
  add_scenario_flags(cmp, cf);
  cmp->add_option("--out-prefix", out_prefix, "write <prefix>_vexp.csv and <prefix>_vonly.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      auto cfg = to_config(sf);
      cfg.mode = parse_mode(mode_str);
      cfg.out_path = out_path;
      const auto cell = spmex::load_params(sf.params_path);
      const auto result = spmex::run_scenario(cfg, cell);
      if (!plot_path.empty()) spmex::emit_plotdata(result.records, plot_path);
      std::printf("wrote %zu records to %s\n", result.records.size(), out_path.c_str());
      print_report(result.report);
    } else if (rep->parsed()) {
      const auto records = spmex::parse_csv(in_path);
      print_report(spmex::rmspe_report(records, t_start));
    } else if (cmp->parsed()) {
      auto cfg = to_config(cf);
      const auto cell = spmex::load_params(cf.params_path);
      cfg.mode = spmex::ObserverMode::VPlusExp;
      if (!out_prefix.empty()) cfg.out_path = out_prefix + "_vexp.csv";
      const auto r_vexp = spmex::run_scenario(cfg, cell);
      cfg.mode = spmex::ObserverMode::VOnly;
      cfg.out_path = out_prefix.empty() ? "" : out_prefix + "_vonly.csv";
      const auto r_vonly = spmex::run_scenario(cfg, cell);
      const auto& a = r_vexp.report;
      const auto& b = r_vonly.report;
      std::printf("RMSPE (%%) over t >= %.0f s%12s%12s\n", a.t_start, "v+exp", "v-only");
      std::printf("  c_ss_neg   %12.4f%12.4f\n", a.css_neg, b.css_neg);
      std::printf("  c_avg_neg  %12.4f%12.4f\n", a.csavg_neg, b.csavg_neg);
      std::printf("  c_ss_pos   %12.4f%12.4f\n", a.css_pos, b.css_pos);
      std::printf("  c_avg_pos  %12.4f%12.4f\n", a.csavg_pos, b.csavg_pos);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
