#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ccc/analysis.hpp"
#include "ccc/controller.hpp"
#include "ccc/experiment.hpp"

namespace fs = std::filesystem;
using namespace ccc;

namespace {

constexpr int kExitFailedClause = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config;
  std::string seed;
  std::string out;
  std::string runs;
  std::string horizon;
  std::string eps;
  std::string mu;
  std::string tau;
  std::string percentiles;
  std::string threads;
  bool strict = false;
};

void add_flags(CLI::App* cmd, CommonFlags& f, bool batch_flags) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--seed", f.seed, "64-bit seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--horizon", f.horizon, "horizon T");
  cmd->add_option("--eps", f.eps, "initialization scale eps");
  cmd->add_option("--mu", f.mu, "star or a value in I_kappa");
  cmd->add_option("--tau", f.tau, "reference time tau");
  cmd->add_flag("--strict", f.strict, "exit 1 when a certification clause fails");
  if (batch_flags) {
    cmd->add_option("--runs", f.runs, "number of runs");
    cmd->add_option("--percentiles", f.percentiles, "comma separated, in (0, 100]");
    cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  }
}

experiment::ExperimentConfig resolve(experiment::ExperimentConfig base, const CommonFlags& f) {
  if (!f.config.empty()) base = experiment::load_config(f.config, std::move(base));
  const std::pair<const char*, const std::string*> overrides[] = {
      {"seed", &f.seed}, {"runs", &f.runs},   {"horizon", &f.horizon},
      {"eps", &f.eps},   {"mu", &f.mu},       {"tau", &f.tau},
      {"percentiles", &f.percentiles},        {"threads", &f.threads}};
  for (const auto& [key, value] : overrides) {
    if (!value->empty()) experiment::apply_setting(base, key, *value);
  }
  base.validate();
  return base;
}

void print_verdicts(const analysis::CertificationReport& r) {
  for (const auto& v : r.verdicts) {
    std::cout << (v.passed ? "PASS " : "FAIL ") << v.name << (v.approximate ? " [approximate]" : "")
              << ": " << v.detail << "\n";
  }
}

int run_simulate(const CommonFlags& f) {
  auto cfg = resolve(experiment::single_run_defaults(), f);
  cfg.runs = 1;
  const fs::path out = f.out.empty() ? fs::path("out/simulate") : fs::path(f.out);
  const auto r = experiment::run_single(cfg, out);
  std::cout << "wrote " << out.string() << "\n";
  std::cout << "kappa_T = " << r.analysis.kappa[r.analysis.horizon - 1]
            << ", m = " << analysis::m_of_kappa(r.analysis.kappa[r.analysis.horizon - 1]) << "\n";
  print_verdicts(r.report);
  return f.strict && !r.report.all_passed() ? kExitFailedClause : 0;
}

int run_batch(const CommonFlags& f) {
  const auto cfg = resolve(experiment::uniform_batch_defaults(), f);
  const fs::path out = f.out.empty() ? fs::path("out/batch") : fs::path(f.out);
  const auto s = experiment::run_batch(cfg, out);
  std::cout << "wrote " << out.string() << "\n";
  std::cout << "median settling time = " << s.median_settling_time << "\n";
  bool all = true;
  for (const auto& [name, frac] : s.pass_fraction) {
    std::cout << "pass_fraction " << name << " = " << frac << "\n";
    all = all && frac == 1.0;
  }
  return f.strict && !all ? kExitFailedClause : 0;
}

int run_certify(const CommonFlags& f, const std::string& trajectory) {
  const auto cfg = resolve(experiment::single_run_defaults(), f);
  const auto lp = experiment::resolve_plant(cfg, 0);
  std::ifstream in(trajectory);
  if (!in) throw std::runtime_error("cannot open trajectory " + trajectory);
  const auto init = controller::init_no_prior(cfg.n, cfg.eps);
  const auto traj = experiment::read_trajectory(in, init, lp.a0());
  const analysis::MuPolicy policy =
      cfg.mu ? analysis::MuPolicy::value(*cfg.mu) : analysis::MuPolicy::star();
  const auto report = analysis::certify(traj, lp.a0(), init, cfg.tau, policy);
  if (f.out.empty()) {
    analysis::write_report_text(std::cout, report);
  } else {
    fs::create_directories(f.out);
    std::ofstream txt(fs::path(f.out) / "report.txt");
    std::ofstream csv(fs::path(f.out) / "report.csv");
    if (!txt || !csv) throw std::runtime_error("cannot write report in " + f.out);
    analysis::write_report_text(txt, report);
    analysis::write_report_csv(csv, report);
    print_verdicts(report);
  }
  return f.strict && !report.all_passed() ? kExitFailedClause : 0;
}

int run_reproduce(const CommonFlags& f) {
  auto cfg = resolve(experiment::uniform_batch_defaults(), f);
  const fs::path out = f.out.empty() ? fs::path("out/figures") : fs::path(f.out);
  experiment::reproduce_figures(cfg.seed, out, cfg.runs, cfg.threads);
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int run_packing(const CommonFlags& f, int candidates, int samples) {
  auto cfg = resolve(experiment::ExperimentConfig{}, f);
  const auto r = experiment::packing_demo(cfg.seed, candidates, samples);
  experiment::write_packing_demo(std::cout, r);
  if (!f.out.empty()) {
    fs::create_directories(f.out);
    std::ofstream out(fs::path(f.out) / "packing.txt");
    if (!out) throw std::runtime_error("cannot write packing.txt in " + f.out);
    experiment::write_packing_demo(out, r);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal cancellation controller experiments"};
  app.require_subcommand(1);

  CommonFlags sim_f, batch_f, cert_f, repro_f, pack_f;
  auto* sim = app.add_subcommand("simulate", "single closed-loop run with certification");
  add_flags(sim, sim_f, false);

  auto* batch = app.add_subcommand("batch", "Monte-Carlo study with percentile tables");
  add_flags(batch, batch_f, true);

  std::string trajectory;
  auto* cert = app.add_subcommand("certify", "certify a recorded trajectory");
  add_flags(cert, cert_f, false);
  cert->add_option("--trajectory", trajectory, "trajectory CSV (t,x..,u..[,w..])")->required();

  auto* repro = app.add_subcommand("reproduce-figures", "uniform, zero and single-run data sets");
  add_flags(repro, repro_f, true);

  int candidates = 400;
  int samples = 100000;
  auto* pack = app.add_subcommand("packing-demo", "separated packing and volume bounds in R^2");
  add_flags(pack, pack_f, false);
  pack->add_option("--candidates", candidates, "candidate points")->check(CLI::NonNegativeNumber);
  pack->add_option("--samples", samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return run_simulate(sim_f);
    if (*batch) return run_batch(batch_f);
    if (*cert) return run_certify(cert_f, trajectory);
    if (*repro) return run_reproduce(repro_f);
    if (*pack) return run_packing(pack_f, candidates, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
