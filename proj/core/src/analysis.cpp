#include "ccc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ccc/linprog.hpp"

namespace ccc::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLinkTol = 1e-7;
constexpr double kStrictSlack = 1e-9;
constexpr double kIdentityTol = 1e-8;
constexpr double kKappaOneTol = 1e-9;
constexpr double kLimsupSlack = 0.05;

// Right-hand sides of upper bounds: an infinite factor makes the bound vacuous,
// so 0 * inf is taken as inf.
double bound_mul(double a, double b) { return (std::isinf(a) || std::isinf(b)) ? kInf : a * b; }

bool leq(double a, double b) { return a <= b + kLinkTol * (1.0 + std::abs(b)); }

bool near(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kLinkTol * (1.0 + std::abs(b));
}

bool strictly_greater(double a, double b) { return a > b - kStrictSlack * std::abs(b); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<Vector> distinct(const std::vector<Vector>& pts) {
  std::vector<Vector> out;
  for (const auto& p : pts) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vector& q) { return q == p; });
    if (!seen) out.push_back(p);
  }
  return out;
}

Matrix data_matrix(const plant::Trajectory& traj, const controller::DataBank& init) {
  const int T = traj.horizon();
  const int n0 = init.init_columns();
  Matrix X(init.dim(), T + n0);
  for (int t = 0; t < T; ++t) X.col(T - 1 - t) = traj.states[t];
  X.rightCols(n0) = init.init_states();
  return X;
}

}  // namespace

Matrix DisturbanceSet::matrix() const { return prefix_matrix(static_cast<int>(realized.size())); }

Matrix DisturbanceSet::prefix_matrix(int t) const {
  if (t < 0 || t > static_cast<int>(realized.size())) {
    throw std::out_of_range("DisturbanceSet::prefix_matrix");
  }
  const Eigen::Index dim = !virtual_.empty() ? virtual_.front().size()
                           : !realized.empty() ? realized.front().size()
                                               : 0;
  const int nv = static_cast<int>(virtual_.size());
  Matrix M(dim, t + nv);
  for (int k = 0; k < t; ++k) M.col(t - 1 - k) = realized[k];
  for (int i = 0; i < nv; ++i) M.col(t + i) = virtual_[i];
  return M;
}

std::vector<Vector> virtual_disturbances(const Matrix& a0, const controller::DataBank& bank) {
  if (a0.rows() != bank.dim() || a0.cols() != bank.dim()) {
    throw std::invalid_argument("virtual_disturbances: A0 dimension mismatch");
  }
  const Matrix W = bank.init_successors() - a0 * bank.init_states() - bank.init_inputs();
  std::vector<Vector> out;
  out.reserve(W.cols());
  for (Eigen::Index i = 0; i < W.cols(); ++i) out.emplace_back(W.col(i));
  return out;
}

DisturbanceSet build_disturbance_set(const Matrix& a0, const controller::DataBank& bank,
                                     const std::vector<Vector>& realized) {
  DisturbanceSet s;
  s.virtual_ = virtual_disturbances(a0, bank);
  for (const auto& w : realized) {
    if (w.size() != bank.dim()) throw std::invalid_argument("build_disturbance_set: dimension");
  }
  s.realized = realized;
  return s;
}

ExtendedReal kappa_tau(const DisturbanceSet& W, const geometry::PointSet& x_cols) {
  return geometry::set_gauge(W.combined(), x_cols);
}

MuInterval mu_interval(ExtendedReal kappa) {
  if (kappa.is_infinite()) return {1.0, 1.0};
  const double k = kappa.value();
  if (!(k > 0.0)) throw std::invalid_argument("mu_interval: kappa must be positive");
  return {1.0 / (std::sqrt(0.25 + 1.0 / k) + 0.5), 1.0};
}

double m_of_kappa(double kappa) {
  if (kappa < 0.0 || std::isnan(kappa)) throw std::invalid_argument("m_of_kappa: negative kappa");
  if (kappa == 0.0) return 1.0;
  if (std::isinf(kappa)) return kInf;
  return kappa * (0.5 + std::sqrt(0.25 + 1.0 / kappa)) + 1.0;
}

MuStar mu_star_and_m(ExtendedReal kappa) {
  const MuInterval I = mu_interval(kappa);
  if (I.empty()) return {1.0, kInf};
  return {I.lower, m_of_kappa(kappa.value())};
}

double delta_from_mu(double mu, double kappa) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("delta_from_mu: mu must be in (0, 1)");
  if (kappa < 0.0 || std::isnan(kappa)) throw std::invalid_argument("delta_from_mu: kappa");
  if (kappa == 0.0) return kInf;
  return mu * mu / ((1.0 - mu) * kappa);
}

double mu_from_delta(double delta, double kappa) {
  if (!(delta > 0.0) || !(kappa > 0.0)) {
    throw std::invalid_argument("mu_from_delta: delta and kappa must be positive");
  }
  return 1.0 / (std::sqrt(0.25 + 1.0 / (delta * kappa)) + 0.5);
}

BoundParameters BoundParameters::from_mu(double kappa, double mu, int n, int tau) {
  if (n < 1) throw std::invalid_argument("BoundParameters: n must be >= 1");
  if (kappa > 0.0 && !mu_interval(kappa).contains(mu)) {
    throw std::domain_error("BoundParameters: mu outside I_kappa");
  }
  BoundParameters p;
  p.kappa = kappa;
  p.mu = mu;
  p.delta = delta_from_mu(mu, kappa);
  p.tau = tau;
  p.n = n;
  return p;
}

double n_bound_delta(double kappa, double delta, int n) {
  if (n < 1) throw std::invalid_argument("n_bound: n must be >= 1");
  if (!(delta > 1.0)) throw std::domain_error("n_bound: delta must exceed 1");
  if (!(kappa > 0.0) || std::isinf(kappa)) throw std::invalid_argument("n_bound: kappa");
  const double dk = delta * kappa;
  const double sd = std::sqrt(delta);
  const double a = sd / (sd - 1.0);
  const double b = std::max(1.0 / dk, std::sqrt(0.25 + 1.0 / dk) + 0.5);
  return 0.5 * std::pow(a * b * dk, n);
}

double n_bound_mu(double kappa, double mu, int n) {
  if (n < 1) throw std::invalid_argument("n_bound: n must be >= 1");
  if (kappa < 0.0 || std::isinf(kappa) || std::isnan(kappa)) {
    throw std::invalid_argument("n_bound: kappa");
  }
  if (!(mu > 0.0 && mu < 1.0) || (kappa > 0.0 && !mu_interval(kappa).contains(mu))) {
    throw std::domain_error("n_bound: mu outside I_kappa");
  }
  const double a = mu / (mu - std::sqrt(kappa * (1.0 - mu)));
  const double b = std::max(1.0, mu / (1.0 - mu));
  return 0.5 * std::pow(a * b, n);
}

double n_bound(const BoundParameters& p) {
  // kappa = 0 leaves delta infinite; the mu form is its limit.
  if (p.kappa == 0.0) return n_bound_mu(0.0, p.mu, p.n);
  return n_bound_delta(p.kappa, p.delta, p.n);
}

std::vector<int> detect_unstable(const std::vector<double>& state_norms, double mu, int tau) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("detect_unstable: mu must be in (0, 1)");
  if (tau < 0) throw std::invalid_argument("detect_unstable: tau must be >= 0");
  std::vector<int> times;
  const double floor = 1.0 / (1.0 - mu);
  for (int t = tau; t + 1 < static_cast<int>(state_norms.size()); ++t) {
    const double next = state_norms[t + 1];
    if (next > std::max(floor, mu * state_norms[t] + 1.0)) times.push_back(t);
  }
  return times;
}

UnstableTransitions detect_unstable(const plant::Trajectory& traj, const geometry::PointSet& W,
                                    double mu, int tau) {
  std::vector<double> norms;
  norms.reserve(traj.states.size());
  for (const auto& x : traj.states) norms.push_back(geometry::gauge_norm(W, x).to_double());
  UnstableTransitions out;
  out.times = detect_unstable(norms, mu, tau);
  for (int t : out.times) out.states.push_back(traj.states[t]);
  return out;
}

std::vector<Vector> project_unstable(const std::vector<Vector>& states,
                                     const BoundParameters& params, const geometry::PointSet& W) {
  std::vector<Vector> out;
  out.reserve(states.size());
  for (const auto& x : states) {
    const ExtendedReal nx = geometry::gauge_norm(W, x);
    if (nx.is_infinite() || nx.value() == 0.0) {
      throw std::logic_error("project_unstable: state with zero or infinite W-norm");
    }
    out.push_back((params.delta / (params.mu * nx.value())) * x);
  }
  return out;
}

LyapunovTraces lyapunov_traces(const std::vector<double>& state_norms, double mu,
                               const std::vector<double>& kappa, int tau) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("lyapunov_traces: mu must be in (0, 1)");
  LyapunovTraces tr;
  const double floor = 1.0 / (1.0 - mu);
  for (double v : state_norms) {
    tr.v1.push_back(std::max(0.0, v - floor));
    tr.v2.push_back(std::max(v, floor));
  }
  const auto unstable = detect_unstable(state_norms, mu, 0);
  const int steps = static_cast<int>(state_norms.size()) - 1;
  tr.classes.assign(std::max(steps, 0), StepClass::Stable);
  tr.clause_ok.assign(std::max(steps, 0), true);
  for (int t : unstable) tr.classes[t] = StepClass::Unstable;
  for (int t = tau; t < steps; ++t) {
    if (tr.classes[t] == StepClass::Stable) {
      tr.clause_ok[t] = leq(tr.v1[t + 1], bound_mul(mu, tr.v1[t])) && leq(tr.v2[t + 1], tr.v2[t]);
    } else {
      const double k = t < static_cast<int>(kappa.size()) ? kappa[t] : kInf;
      tr.clause_ok[t] = leq(tr.v2[t + 1], bound_mul(k, tr.v2[t]) + 1.0) &&
                        tr.v1[t + 1] > mu * tr.v1[t];
    }
  }
  return tr;
}

WorstCase worst_case_bound(double kappa, double mu, double x_tau_norm, int n) {
  const BoundParameters p = BoundParameters::from_mu(kappa, mu, n);
  WorstCase w;
  w.n_bound = n_bound(p);
  const double kN = std::pow(kappa, w.n_bound);
  w.f = std::max(1.0, kN) * std::max(1.0 / (1.0 - mu), x_tau_norm);
  w.g = std::abs(kappa - 1.0) < kKappaOneTol ? w.n_bound : (1.0 - kN) / (1.0 - kappa);
  w.total = w.f + w.g;
  return w;
}

ExtendedReal a0_gauge(const Matrix& a0, const geometry::PointSet& W) {
  if (a0.rows() != W.dim() || a0.cols() != W.dim()) {
    throw std::invalid_argument("a0_gauge: dimension mismatch");
  }
  ExtendedReal best(0.0);
  for (int i = 0; i < W.size(); ++i) {
    best = max(best, geometry::gauge_norm(W, a0 * W.generators().col(i)));
    if (best.is_infinite()) break;
  }
  return best;
}

double packing_bound(double kappa, double mu, double delta, int n) {
  if (n < 1) throw std::invalid_argument("packing_bound: n must be >= 1");
  if (!(delta > 1.0)) throw std::domain_error("packing_bound: delta must exceed 1");
  if (!(mu > 0.0) || kappa < 0.0) throw std::invalid_argument("packing_bound: mu, kappa");
  const double sd = std::sqrt(delta);
  return 0.5 * std::pow(sd / (sd - 1.0), n) * std::pow(std::max(1.0, delta * kappa / mu), n);
}

VolumeSandwich volume_sandwich(const std::vector<Vector>& packed, double delta, double kappa,
                               double mu, const geometry::PointSet& B, int samples,
                               std::uint64_t seed) {
  if (!(delta > 1.0)) throw std::domain_error("volume_sandwich: delta must exceed 1");
  const int n = B.dim();
  VolumeSandwich out;
  out.base = geometry::estimate_volume(B, samples, seed);
  const double sd = std::sqrt(delta);
  out.lower = 2.0 * std::pow(sd - 1.0, n) * out.base.volume * static_cast<double>(packed.size());
  out.upper = std::pow(delta, 0.5 * n) * std::pow(std::max(1.0, kappa * delta / mu), n) *
              out.base.volume;

  // q in N(p; sqrt(delta), B) implies q in sqrt(delta) C(B + p).
  Vector h = geometry::bounding_half_widths(B);
  for (const auto& p : packed) h = h.cwiseMax(p.cwiseAbs());
  h *= sd;
  const auto inside = [&](const Vector& q) {
    return std::any_of(packed.begin(), packed.end(), [&](const Vector& p) {
      return geometry::neighborhood_contains(p, sd, B, q);
    });
  };
  out.union_ = geometry::estimate_volume_in_box(inside, -h, h, samples, seed + 1);
  return out;
}

RunAnalysis analyze_run(const plant::Trajectory& traj, const Matrix& a0,
                        const controller::DataBank& init, int tau) {
  const int T = traj.horizon();
  const int n = init.dim();
  const int n0 = init.init_columns();
  if (T < 1) throw std::invalid_argument("analyze_run: empty trajectory");
  if (tau < 0 || tau > T) throw std::invalid_argument("analyze_run: tau outside [0, T]");
  if (static_cast<int>(traj.states.size()) != T + 1 ||
      static_cast<int>(traj.disturbances.size()) != T ||
      static_cast<int>(traj.lambdas.size()) != T) {
    throw std::invalid_argument("analyze_run: inconsistent trajectory lengths");
  }

  RunAnalysis r;
  r.n = n;
  r.horizon = T;
  r.tau = tau;
  r.states = traj.states;
  r.disturbances = build_disturbance_set(a0, init, traj.disturbances);
  const Matrix Wmat = r.disturbances.matrix();
  r.W = geometry::PointSet(Wmat);
  const Matrix X = data_matrix(traj, init);
  r.x_tau_cols = geometry::PointSet(Matrix(X.rightCols(tau + n0)));

  for (int t = 0; t <= T; ++t) {
    const geometry::PointSet Xt(Matrix(X.rightCols(t + n0)));
    r.kappa.push_back(geometry::set_gauge(r.W, Xt).to_double());
    r.state_norm.push_back(geometry::gauge_norm(r.W, traj.states[t]).to_double());
    r.state_2norm.push_back(traj.states[t].norm());
    if (t < T) {
      r.input_norm.push_back(geometry::gauge_norm(r.W, traj.inputs[t]).to_double());
      r.input_2norm.push_back(traj.inputs[t].norm());
      r.state_norm_x.push_back(geometry::gauge_norm(Xt, traj.states[t]).to_double());
      r.lambda_l1.push_back(traj.lambdas[t].lpNorm<1>());
    }
  }
  r.kappa_tau = r.kappa[tau];
  r.a0_norm = a0_gauge(a0, r.W).to_double();

  r.x_tau_bound_norm = r.state_norm[tau];
  if (tau == 0 && std::isinf(r.state_norm[0])) {
    r.x0_norm_substituted = true;
    r.x_tau_bound_norm = geometry::gauge_norm(r.W, a0 * traj.states[0]).to_double();
  }

  double scale = 1.0;
  for (int t = 0; t < T; ++t) {
    const Matrix Wt = Wmat.rightCols(t + n0);
    const Vector cancel = Wt * traj.lambdas[t];
    const Vector cl = traj.states[t + 1] + cancel - traj.disturbances[t];
    const Vector db = traj.inputs[t] + a0 * traj.states[t] + cancel;
    r.closed_loop_residual = std::max(r.closed_loop_residual, cl.lpNorm<Eigen::Infinity>());
    r.deadbeat_residual = std::max(r.deadbeat_residual, db.lpNorm<Eigen::Infinity>());
    const double wmax = Wt.cols() > 0 ? Wt.lpNorm<Eigen::Infinity>() : 0.0;
    scale = std::max(scale, 1.0 + traj.states[t + 1].lpNorm<Eigen::Infinity>() +
                                traj.inputs[t].lpNorm<Eigen::Infinity>() +
                                (a0 * traj.states[t]).lpNorm<Eigen::Infinity>() +
                                wmax * r.lambda_l1[t]);
  }
  r.identity_scale = scale;
  return r;
}

const std::vector<std::string>& verdict_names() {
  static const std::vector<std::string> names = {
      "mu_in_interval",   "closed_loop_identity", "deadbeat_identity", "norm_chain",
      "transition_clauses", "transition_count_bound",      "transition_lower_bound",          "distinct_projections",
      "separation",       "exp_decay",            "limsup_tail",       "worst_case_state",
      "input_bound",      "subbound_alpha_beta"};
  return names;
}

bool CertificationReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const Verdict& CertificationReport::verdict(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return v;
  }
  throw std::out_of_range("CertificationReport: no verdict named " + name);
}

int settling_time(const std::vector<int>& transition_times, int tau) {
  return transition_times.empty() ? tau : transition_times.back() + 1;
}

CertificationReport certify(const RunAnalysis& run, const MuPolicy& policy) {
  CertificationReport rep;
  rep.n = run.n;
  rep.horizon = run.horizon;
  rep.tau = run.tau;
  rep.kappa = run.kappa;
  rep.kappa_tau = run.kappa_tau;
  rep.state_norm = run.state_norm;
  rep.input_norm = run.input_norm;
  rep.a0_norm = run.a0_norm;
  rep.x0_norm_substituted = run.x0_norm_substituted;
  rep.closed_loop_residual = run.closed_loop_residual;
  rep.deadbeat_residual = run.deadbeat_residual;

  const int T = run.horizon;
  const int tau = run.tau;
  const double kt = run.kappa_tau;
  auto add = [&rep](const std::string& name, bool ok, std::string detail, bool approx = false) {
    rep.verdicts.push_back({name, ok, approx, std::move(detail)});
  };

  if (kt == 0.0) {
    // W spans only the origin: every mu in (0, 1) is admissible.
    rep.interval = {0.0, 1.0};
    rep.mu_star = 0.0;
    rep.m_kappa = 1.0;
  } else {
    rep.interval = mu_interval(std::isinf(kt) ? ExtendedReal::infinity() : ExtendedReal(kt));
    const MuStar ms = mu_star_and_m(std::isinf(kt) ? ExtendedReal::infinity() : ExtendedReal(kt));
    rep.mu_star = ms.mu;
    rep.m_kappa = ms.m;
  }
  if (policy.fixed) {
    rep.mu = *policy.fixed;
  } else {
    rep.mu = kt == 0.0 ? 0.5 : rep.mu_star;
  }
  // mu* is the open lower end of I_kappa; the bounds hold there by continuity.
  const bool at_star = !policy.fixed && kt > 0.0 && !std::isinf(kt);
  rep.mu_valid = at_star || (rep.mu > 0.0 && rep.mu < 1.0 && rep.interval.contains(rep.mu)) ||
                 (kt == 0.0 && rep.mu > 0.0 && rep.mu < 1.0);
  add("mu_in_interval", rep.mu_valid,
      "mu=" + fmt(rep.mu) + " I=(" + fmt(rep.interval.lower) + ", 1)" +
          (at_star ? " (mu*, boundary)" : ""));

  const double id_tol = kIdentityTol * run.identity_scale;
  add("closed_loop_identity", run.closed_loop_residual <= id_tol,
      "max residual " + fmt(run.closed_loop_residual));
  add("deadbeat_identity", run.deadbeat_residual <= id_tol,
      "max residual " + fmt(run.deadbeat_residual));

  {
    bool ok = true;
    int bad = -1;
    for (int t = tau; t < T && ok; ++t) {
      const double a = run.state_norm[t + 1];
      const double b = run.lambda_l1[t];
      const double c = run.state_norm_x[t];
      const double d = bound_mul(run.kappa[t], run.state_norm[t]);
      const double e = bound_mul(kt, run.state_norm[t]);
      ok = leq(a, b + 1.0) && near(b, c) && leq(c, d) && leq(d, e);
      if (!ok) bad = t;
    }
    add("norm_chain", ok, ok ? "all links hold" : "fails at t=" + std::to_string(bad));
  }

  if (!rep.mu_valid) {
    for (const auto& name : verdict_names()) {
      if (name == "mu_in_interval" || name == "closed_loop_identity" ||
          name == "deadbeat_identity" || name == "norm_chain") {
        continue;
      }
      add(name, false, "mu outside I_kappa");
    }
    return rep;
  }

  const double mu = rep.mu;
  const BoundParameters params{kt, mu, delta_from_mu(mu, kt), tau, run.n};
  rep.delta = params.delta;
  // delta -> 1 at mu*, where the transition count bound diverges.
  rep.n_bound = at_star ? kInf : n_bound(params);

  rep.transition_times = detect_unstable(run.state_norm, mu, tau);
  std::vector<Vector> origins;
  for (int t : rep.transition_times) origins.push_back(run.states[t]);
  rep.unstable_states = distinct(origins);

  const LyapunovTraces tr = lyapunov_traces(run.state_norm, mu, run.kappa, tau);
  rep.v1 = tr.v1;
  rep.v2 = tr.v2;
  {
    int bad = -1;
    for (int t = tau; t < T; ++t) {
      if (!tr.clause_ok[t]) {
        bad = t;
        break;
      }
    }
    add("transition_clauses", bad < 0, bad < 0 ? "all steps" : "fails at t=" + std::to_string(bad));
  }

  const auto M = static_cast<double>(rep.transition_times.size());
  add("transition_count_bound", M <= rep.n_bound,
      std::to_string(rep.transition_times.size()) + " <= N=" + fmt(rep.n_bound));

  {
    bool ok = true;
    for (int t : rep.transition_times) {
      const double nx = run.state_norm[t];
      const double lhs1 = mu * nx;
      const double rhs1 = (mu * mu / (1.0 - mu)) / run.kappa[t];
      const double lhs2 = run.state_norm_x[t] / lhs1;
      ok = ok && strictly_greater(lhs1, rhs1) && strictly_greater(lhs2, 1.0);
    }
    add("transition_lower_bound", ok, std::to_string(rep.transition_times.size()) + " transitions checked");
  }

  bool projectable = true;
  for (const auto& x : rep.unstable_states) {
    const double nx = geometry::gauge_norm(run.W, x).to_double();
    if (std::isinf(nx) || nx == 0.0) projectable = false;
  }
  if (projectable) {
    rep.projected = project_unstable(rep.unstable_states, params, run.W);
    const auto unique = distinct(rep.projected);
    add("distinct_projections", unique.size() == rep.unstable_states.size(),
        "|P|=" + std::to_string(unique.size()) + " |X|=" + std::to_string(rep.unstable_states.size()));
    const bool sep = rep.projected.size() < 2 ||
                     geometry::is_separated(rep.projected, params.delta, run.x_tau_cols);
    add("separation", sep, "delta=" + fmt(params.delta));
  } else {
    add("distinct_projections", false, "unstable state with zero or infinite W-norm");
    add("separation", false, "projection undefined");
  }

  rep.t_prime = settling_time(rep.transition_times, tau);
  {
    bool ok = true;
    const double base = rep.v1[rep.t_prime];
    for (int k = 0; rep.t_prime + k <= T; ++k) {
      const double bound = bound_mul(std::pow(mu, k), base) + kLinkTol;
      if (!(rep.v1[rep.t_prime + k] <= bound)) ok = false;
    }
    add("exp_decay", ok, "T'=" + std::to_string(rep.t_prime));
  }

  {
    const int start = T - T / 4;
    rep.limsup_value = 0.0;
    for (int t = start; t <= T; ++t) rep.limsup_value = std::max(rep.limsup_value, run.state_norm[t]);
    rep.limsup_threshold = 1.0 / (1.0 - mu) + kLimsupSlack;
    add("limsup_tail", rep.limsup_value <= rep.limsup_threshold,
        "max over t>=" + std::to_string(start) + " = " + fmt(rep.limsup_value) + " vs " +
            fmt(rep.limsup_threshold),
        true);
  }

  {
    const double kN = std::pow(kt, rep.n_bound);
    rep.f = std::max(1.0, kN) * std::max(1.0 / (1.0 - mu), run.x_tau_bound_norm);
    rep.g = std::abs(kt - 1.0) < kKappaOneTol ? rep.n_bound : (1.0 - kN) / (1.0 - kt);
    rep.worst_case = rep.f + rep.g;
    const int first = run.x0_norm_substituted ? 1 : tau;
    rep.max_state_norm = 0.0;
    for (int t = first; t <= T; ++t) rep.max_state_norm = std::max(rep.max_state_norm, run.state_norm[t]);
    add("worst_case_state", rep.max_state_norm <= rep.worst_case + kLinkTol,
        fmt(rep.max_state_norm) + " <= f+g=" + fmt(rep.worst_case) +
            (run.x0_norm_substituted ? " (||A0 x0||_W substituted)" : ""));

    rep.input_constant = rep.a0_norm + kt;
    bool ok = true;
    rep.max_input_norm = 0.0;
    for (int t = first; t < T; ++t) {
      rep.max_input_norm = std::max(rep.max_input_norm, run.input_norm[t]);
      if (!leq(run.input_norm[t], bound_mul(rep.input_constant, run.state_norm[t]))) ok = false;
    }
    const double input_worst = bound_mul(rep.input_constant, rep.worst_case);
    ok = ok && rep.max_input_norm <= input_worst + kLinkTol;
    add("input_bound", ok, "constant " + fmt(rep.input_constant));
  }

  {
    rep.alpha = 1.0;
    rep.beta = 0.0;
    const auto& tt = rep.transition_times;
    for (int t : tt) rep.alpha = bound_mul(rep.alpha, run.kappa[t]);
    // V2 after the last transition <= alpha V2(x_tau) + beta, unrolling
    // V2' <= kappa_t V2 + 1 from the last transition backwards.
    double prod = 1.0;
    for (std::size_t k = 0; k < tt.size(); ++k) {
      rep.beta += prod;
      prod = bound_mul(prod, run.kappa[tt[tt.size() - 1 - k]]);
    }
    if (tt.empty()) {
      rep.v2_after_last = rep.v2[tau];
      add("subbound_alpha_beta", true, "no transitions");
    } else {
      rep.v2_after_last = rep.v2[tt.back() + 1];
      const double rhs = bound_mul(rep.alpha, rep.v2[tau]) + rep.beta;
      add("subbound_alpha_beta", leq(rep.v2_after_last, rhs),
          "alpha=" + fmt(rep.alpha) + " beta=" + fmt(rep.beta));
    }
  }
  return rep;
}

CertificationReport certify(const plant::Trajectory& traj, const Matrix& a0,
                            const controller::DataBank& init, int tau, const MuPolicy& policy) {
  return certify(analyze_run(traj, a0, init, tau), policy);
}

}  // namespace ccc::analysis
