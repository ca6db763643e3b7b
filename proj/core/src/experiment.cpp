#include "ccc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ccc/csv.hpp"
#include "ccc/random.hpp"

namespace ccc::experiment {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string percentile_file(double p) {
  std::string s = csv::format_double(p);
  std::replace(s.begin(), s.end(), '.', '_');
  return "percentile_" + s + ".csv";
}

int resolve_threads(int requested, int runs) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(t, 1, runs);
}

struct BatchEntry {
  SeriesTable series;
  std::vector<bool> passed;
  int settling = 0;
};

BatchEntry batch_entry(const ExperimentConfig& cfg, std::uint64_t index) {
  RunResult r = simulate_run(cfg, index);
  BatchEntry e;
  e.series = std::move(r.series);
  for (const auto& v : r.report.verdicts) e.passed.push_back(v.passed);
  double mu_star = r.report.mu_star;
  if (!(mu_star > 0.0 && mu_star < 1.0)) mu_star = 0.5;
  e.settling = analysis::settling_time(
      analysis::detect_unstable(r.analysis.state_norm, mu_star, cfg.tau), cfg.tau);
  return e;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

}  // namespace

std::vector<Vector> read_disturbances(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open disturbance file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty disturbance file " + path.string());
  const auto header = csv::split(line);
  std::vector<std::size_t> col(n);
  for (int i = 0; i < n; ++i) {
    const auto it = std::find(header.begin(), header.end(), "w" + std::to_string(i + 1));
    if (it == header.end()) throw std::runtime_error(path.string() + ": missing column w" + std::to_string(i + 1));
    col[i] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<Vector> out;
  while (std::getline(in, line)) {
    if (csv::is_blank(line)) continue;
    const auto f = csv::split(line);
    if (f.size() <= col[0] || csv::is_blank(f[col[0]])) continue;
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = csv::parse_double(f.at(col[i]));
    out.push_back(w);
  }
  return out;
}

plant::LinearPlant resolve_plant(const ExperimentConfig& cfg, std::uint64_t run_index) {
  if (cfg.a0) return plant::LinearPlant(*cfg.a0);
  if (cfg.plant == PlantChoice::Reference) return plant::reference_plant();
  Rng master(derive_seed(cfg.seed, run_index));
  return plant::random_plant(cfg.n, master.next_u64());
}

RunResult simulate_run(const ExperimentConfig& cfg, std::uint64_t run_index) {
  cfg.validate();
  Rng master(derive_seed(cfg.seed, run_index));
  const std::uint64_t plant_seed = master.next_u64();
  const std::uint64_t noise_seed = master.next_u64();

  plant::LinearPlant lp = cfg.a0 ? plant::LinearPlant(*cfg.a0)
                          : cfg.plant == PlantChoice::Reference
                              ? plant::reference_plant()
                              : plant::random_plant(cfg.n, plant_seed);
  const Vector x0 = cfg.x0 ? *cfg.x0 : master.gaussian_vector(cfg.n, cfg.x0_sigma);

  std::vector<Vector> w;
  switch (cfg.disturbance) {
    case DisturbanceScenario::Uniform:
      w = plant::DisturbanceModel::uniform_box(Vector::Constant(cfg.n, cfg.half_width), noise_seed)
              .generate(cfg.n, cfg.horizon);
      break;
    case DisturbanceScenario::Zero:
      w = plant::DisturbanceModel::zero().generate(cfg.n, cfg.horizon);
      break;
    case DisturbanceScenario::Explicit:
      w = plant::DisturbanceModel::explicit_sequence(read_disturbances(cfg.disturbance_file, cfg.n))
              .generate(cfg.n, cfg.horizon);
      break;
  }

  controller::DataBank init = controller::init_no_prior(cfg.n, cfg.eps);
  auto [traj, bank] = plant::run_closed_loop(lp, init, w, x0, cfg.horizon);
  (void)bank;
  analysis::RunAnalysis run = analysis::analyze_run(traj, lp.a0(), init, cfg.tau);
  const analysis::MuPolicy policy =
      cfg.mu ? analysis::MuPolicy::value(*cfg.mu) : analysis::MuPolicy::star();
  analysis::CertificationReport report = analysis::certify(run, policy);
  SeriesTable series = series_from(run);
  return RunResult{std::move(lp),  std::move(init),   std::move(traj),
                   std::move(run), std::move(report), std::move(series)};
}

SeriesTable series_from(const analysis::RunAnalysis& run) {
  SeriesTable s;
  const int T = run.horizon;
  for (const auto& name : kSeriesColumns) s.columns[name].reserve(T);
  for (int t = 0; t < T; ++t) {
    s.t.push_back(t);
    s.columns["xbvec"].push_back(run.state_norm[t]);
    s.columns["ubvec"].push_back(run.input_norm[t]);
    s.columns["kappa"].push_back(run.kappa[t]);
    s.columns["mkappa"].push_back(analysis::m_of_kappa(run.kappa[t]));
    s.columns["x2norm"].push_back(run.state_2norm[t]);
    s.columns["u2norm"].push_back(run.input_2norm[t]);
  }
  return s;
}

void write_trajectory(std::ostream& os, const plant::Trajectory& traj) {
  const int n = traj.dim();
  const int T = traj.horizon();
  os << "t";
  for (const char* p : {"x", "u", "w"}) {
    for (int i = 1; i <= n; ++i) os << ',' << p << i;
  }
  os << '\n';
  for (int t = 0; t <= T; ++t) {
    os << t;
    for (int i = 0; i < n; ++i) os << ',' << csv::format_double(traj.states[t](i));
    for (const auto* seq : {&traj.inputs, &traj.disturbances}) {
      for (int i = 0; i < n; ++i) {
        os << ',';
        if (t < T) os << csv::format_double((*seq)[t](i));
      }
    }
    os << '\n';
  }
}

plant::Trajectory read_trajectory(std::istream& is, const controller::DataBank& init,
                                  const Eigen::MatrixXd& a0) {
  const int n = init.dim();
  if (a0.rows() != n || a0.cols() != n) throw std::invalid_argument("read_trajectory: A0 dimension");
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_trajectory: empty input");
  const auto header = csv::split(line);
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> xc(n), uc(n);
  std::vector<std::optional<std::size_t>> wc(n);
  for (int i = 0; i < n; ++i) {
    const auto x = find("x" + std::to_string(i + 1));
    const auto u = find("u" + std::to_string(i + 1));
    if (!x || !u) throw std::invalid_argument("read_trajectory: missing x or u column");
    xc[i] = *x;
    uc[i] = *u;
    wc[i] = find("w" + std::to_string(i + 1));
  }
  const bool has_w = std::all_of(wc.begin(), wc.end(), [](const auto& c) { return c.has_value(); });

  plant::Trajectory traj;
  std::vector<std::optional<Vector>> ws;
  while (std::getline(is, line)) {
    if (csv::is_blank(line)) continue;
    const auto f = csv::split(line);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = csv::parse_double(f.at(xc[i]));
    traj.states.push_back(x);
    if (uc[0] < f.size() && !csv::is_blank(f[uc[0]])) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u(i) = csv::parse_double(f.at(uc[i]));
      traj.inputs.push_back(u);
      if (has_w) {
        Vector w(n);
        for (int i = 0; i < n; ++i) w(i) = csv::parse_double(f.at(*wc[i]));
        ws.emplace_back(w);
      } else {
        ws.emplace_back(std::nullopt);
      }
    }
  }
  if (traj.states.size() != traj.inputs.size() + 1 || traj.inputs.empty()) {
    throw std::invalid_argument("read_trajectory: need T inputs and T+1 states");
  }
  controller::DataBank bank = init;
  for (std::size_t t = 0; t < traj.inputs.size(); ++t) {
    const auto& x = traj.states[t];
    const auto& u = traj.inputs[t];
    const auto& xn = traj.states[t + 1];
    traj.disturbances.push_back(ws[t] ? *ws[t] : Vector(xn - a0 * x - u));
    traj.lambdas.push_back(controller::control(bank, x).lambda);
    bank.append(x, u, xn);
  }
  return traj;
}

RunResult run_single(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ensure_dir(out);
  RunResult r = simulate_run(cfg, 0);
  {
    auto f = open_out(out / "config.txt");
    write_config(f, cfg);
  }
  {
    auto f = open_out(out / "trajectory.csv");
    write_trajectory(f, r.trajectory);
  }
  {
    auto f = open_out(out / "series.csv");
    write_series(f, r.series);
  }
  {
    auto f = open_out(out / "report.txt");
    analysis::write_report_text(f, r.report);
  }
  {
    auto f = open_out(out / "report.csv");
    analysis::write_report_csv(f, r.report);
  }
  return r;
}

BatchSummary run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  const int runs = cfg.runs;
  std::vector<BatchEntry> entries(runs);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < runs; i = next++) {
      try {
        entries[i] = batch_entry(cfg, static_cast<std::uint64_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int nthreads = resolve_threads(cfg.threads, runs);
  std::vector<std::thread> pool;
  for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  BatchSummary s;
  s.runs = runs;
  const auto& names = analysis::verdict_names();
  for (std::size_t v = 0; v < names.size(); ++v) {
    int pass = 0;
    for (const auto& e : entries) pass += (v < e.passed.size() && e.passed[v]) ? 1 : 0;
    s.pass_fraction[names[v]] = static_cast<double>(pass) / runs;
  }
  std::vector<double> settle;
  std::vector<SeriesTable> tables;
  settle.reserve(runs);
  tables.reserve(runs);
  for (auto& e : entries) {
    settle.push_back(e.settling);
    tables.push_back(std::move(e.series));
  }
  s.median_settling_time = median(settle);
  for (double p : cfg.percentiles) s.percentile_tables[p] = aggregate(tables, p);
  return s;
}

BatchSummary run_batch(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ensure_dir(out);
  {
    auto f = open_out(out / "config.txt");
    write_config(f, cfg);
  }
  BatchSummary s = run_batch(cfg);
  for (const auto& [p, table] : s.percentile_tables) {
    auto f = open_out(out / percentile_file(p));
    write_series(f, table);
  }
  auto f = open_out(out / "summary.txt");
  f << "runs = " << s.runs << "\n";
  f << "seed = " << cfg.seed << "\n";
  f << "median_settling_time = " << csv::format_double(s.median_settling_time) << "\n";
  for (const auto& name : analysis::verdict_names()) {
    f << "pass_fraction." << name << " = " << csv::format_double(s.pass_fraction.at(name)) << "\n";
  }
  return s;
}

void reproduce_figures(std::uint64_t seed, const std::filesystem::path& out, int runs,
                       int threads) {
  ExperimentConfig uniform = uniform_batch_defaults();
  uniform.seed = seed;
  uniform.runs = runs;
  uniform.threads = threads;
  run_batch(uniform, out / "uniform");

  ExperimentConfig zero = zero_batch_defaults();
  zero.seed = seed;
  zero.runs = runs;
  zero.threads = threads;
  run_batch(zero, out / "zero");

  ExperimentConfig single = single_run_defaults();
  single.seed = seed;
  run_single(single, out / "single");
}

PackingDemoResult packing_demo(std::uint64_t seed, int candidates, int samples) {
  if (candidates < 0 || samples < 1) throw std::invalid_argument("packing_demo: bad sizes");
  constexpr int n = 2;
  Rng rng(seed);
  const geometry::PointSet B(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd wm(n, 4);
  for (int j = 0; j < wm.cols(); ++j) wm.col(j) = rng.gaussian_vector(n);
  const geometry::PointSet W(wm);

  PackingDemoResult r;
  r.kappa = geometry::set_gauge(W, B).value();
  r.mu = 0.5 * (analysis::mu_interval(r.kappa).lower + 1.0);
  r.delta = analysis::delta_from_mu(r.mu, r.kappa);
  r.candidates = candidates;

  std::vector<Vector> cands;
  for (int i = 0; i < candidates; ++i) {
    Vector v = rng.gaussian_vector(n);
    const double nv = geometry::gauge_norm(W, v).value();
    cands.push_back((r.delta / (r.mu * nv)) * v);
  }
  const auto packed = geometry::greedy_packing(cands, r.delta, B);
  r.packed = static_cast<int>(packed.size());
  r.bound = analysis::packing_bound(r.kappa, r.mu, r.delta, n);
  r.volume = analysis::volume_sandwich(packed, r.delta, r.kappa, r.mu, B, samples, rng.next_u64());
  return r;
}

void write_packing_demo(std::ostream& os, const PackingDemoResult& r) {
  using csv::format_double;
  os << "kappa = " << format_double(r.kappa) << "\n";
  os << "mu = " << format_double(r.mu) << "\n";
  os << "delta = " << format_double(r.delta) << "\n";
  os << "candidates = " << r.candidates << "\n";
  os << "packed = " << r.packed << "\n";
  os << "cardinality_bound = " << format_double(r.bound) << "\n";
  os << "vol_base = " << format_double(r.volume.base.volume) << " +- "
     << format_double(r.volume.base.std_error) << "\n";
  os << "vol_union = " << format_double(r.volume.union_.volume) << " +- "
     << format_double(r.volume.union_.std_error) << "\n";
  os << "vol_lower_bound = " << format_double(r.volume.lower) << "\n";
  os << "vol_upper_bound = " << format_double(r.volume.upper) << "\n";
}

}  // namespace ccc::experiment
