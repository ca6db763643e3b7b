#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccc/controller.hpp"
#include "ccc/convex_geometry.hpp"
#include "ccc/extended_real.hpp"
#include "ccc/plant.hpp"

namespace ccc::analysis {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Realized disturbances plus the virtual ones implied by the initialization.
struct DisturbanceSet {
  std::vector<Vector> realized;  // w_0 .. w_{T-1}
  std::vector<Vector> virtual_;  // one per initialization column

  /// Newest first: [w_{T-1}, ..., w_0, virtual columns].
  [[nodiscard]] Matrix matrix() const;
  [[nodiscard]] geometry::PointSet combined() const { return geometry::PointSet(matrix()); }
  /// W_{t-1} = [w_{t-1}, ..., w_0, virtual columns].
  [[nodiscard]] Matrix prefix_matrix(int t) const;
};

/// w_hat_i = xplus_i - A0 x_i - u_i for every initialization column.
[[nodiscard]] std::vector<Vector> virtual_disturbances(const Matrix& a0,
                                                       const controller::DataBank& bank);

[[nodiscard]] DisturbanceSet build_disturbance_set(const Matrix& a0,
                                                   const controller::DataBank& bank,
                                                   const std::vector<Vector>& realized);

/// kappa = ||W||_X, the max over W of the gauge w.r.t. the data columns.
[[nodiscard]] ExtendedReal kappa_tau(const DisturbanceSet& W, const geometry::PointSet& x_cols);

struct MuInterval {
  double lower = 0.0;
  double upper = 1.0;
  [[nodiscard]] bool empty() const { return !(lower < upper); }
  [[nodiscard]] bool contains(double mu) const { return mu > lower && mu < upper; }
};

/// I_kappa = ((sqrt(1/4 + 1/kappa) + 1/2)^-1, 1). Infinite kappa gives an empty
/// interval. Throws std::invalid_argument for kappa <= 0.
[[nodiscard]] MuInterval mu_interval(ExtendedReal kappa);

/// m(kappa) = kappa (1/2 + sqrt(1/4 + 1/kappa)) + 1, with m(0) = 1.
[[nodiscard]] double m_of_kappa(double kappa);

struct MuStar {
  double mu = 0.0;
  double m = 0.0;  // 1 / (1 - mu)
};

[[nodiscard]] MuStar mu_star_and_m(ExtendedReal kappa);

/// delta = mu^2 / ((1 - mu) kappa).
[[nodiscard]] double delta_from_mu(double mu, double kappa);
/// mu = (sqrt(1/4 + 1/(delta kappa)) + 1/2)^-1.
[[nodiscard]] double mu_from_delta(double delta, double kappa);

struct BoundParameters {
  double kappa = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  int tau = 0;
  int n = 1;

  /// Fills delta from mu. Throws std::domain_error when mu is not in I_kappa.
  static BoundParameters from_mu(double kappa, double mu, int n, int tau = 0);
};

/// Bound on the number of mu-unstable transitions, delta form:
///   1/2 (sqrt(d)/(sqrt(d)-1))^n max{1/(d k), sqrt(1/4 + 1/(d k)) + 1/2}^n (d k)^n.
/// Throws std::domain_error when delta <= 1.
[[nodiscard]] double n_bound(const BoundParameters& p);
[[nodiscard]] double n_bound_delta(double kappa, double delta, int n);
/// mu form: 1/2 (mu/(mu - sqrt(kappa (1-mu))))^n max{1, mu/(1-mu)}^n.
/// Throws std::domain_error when mu is not in I_kappa.
[[nodiscard]] double n_bound_mu(double kappa, double mu, int n);

struct UnstableTransitions {
  std::vector<int> times;        // t with a mu-unstable transition (x_t -> x_{t+1})
  std::vector<Vector> states;    // x_t for each time
};

/// All t >= tau with ||x_{t+1}||_W > max{1/(1-mu), mu ||x_t||_W + 1}.
[[nodiscard]] UnstableTransitions detect_unstable(const plant::Trajectory& traj,
                                                  const geometry::PointSet& W, double mu,
                                                  int tau);
/// Same, from precomputed norms ||x_t||_W, t = 0 .. T.
[[nodiscard]] std::vector<int> detect_unstable(const std::vector<double>& state_norms, double mu,
                                               int tau);

/// Pi(p) = delta / (mu ||p||_W) p for every state. Throws std::logic_error for
/// a state with zero or infinite norm.
[[nodiscard]] std::vector<Vector> project_unstable(const std::vector<Vector>& states,
                                                   const BoundParameters& params,
                                                   const geometry::PointSet& W);

enum class StepClass { Stable, Unstable };

struct LyapunovTraces {
  std::vector<double> v1;          // per state, t = 0 .. T
  std::vector<double> v2;
  std::vector<StepClass> classes;  // per transition t -> t+1, t = 0 .. T-1
  std::vector<bool> clause_ok;     // per-transition clause (true before tau)
};

/// V1 = max{0, ||x||_W - 1/(1-mu)}, V2 = max{||x||_W, 1/(1-mu)}. For t >= tau,
/// stable steps must satisfy V1' <= mu V1 and V2' <= V2, unstable steps
/// V2' <= kappa_t V2 + 1 and V1' > mu V1.
[[nodiscard]] LyapunovTraces lyapunov_traces(const std::vector<double>& state_norms, double mu,
                                             const std::vector<double>& kappa, int tau);

struct WorstCase {
  double n_bound = 0.0;
  double f = 0.0;
  double g = 0.0;
  double total = 0.0;
};

/// f = max{1, kappa^N} max{1/(1-mu), ||x_tau||_W}, g = (1 - kappa^N)/(1 - kappa),
/// with g = N when |kappa - 1| < 1e-9.
[[nodiscard]] WorstCase worst_case_bound(double kappa, double mu, double x_tau_norm, int n);

/// ||A0||_W = max over generators w of ||A0 w||_W.
[[nodiscard]] ExtendedReal a0_gauge(const Matrix& a0, const geometry::PointSet& W);

/// Cardinality bound for a (delta; B)-separated set inside (delta/mu) C(W)
/// when C(W) lies in kappa C(B):
///   1/2 (sqrt(delta)/(sqrt(delta)-1))^n max{1, delta kappa/mu}^n.
[[nodiscard]] double packing_bound(double kappa, double mu, double delta, int n);

struct VolumeSandwich {
  double lower = 0.0;   // 2 (sqrt(delta)-1)^n Vol(C(B)) |P|
  double upper = 0.0;   // delta^{n/2} max{1, kappa delta/mu}^n Vol(C(B))
  geometry::VolumeEstimate base;   // Vol(C(B))
  geometry::VolumeEstimate union_; // Vol(union of N(p; sqrt(delta), B))
};

/// Monte-Carlo check of the volume bounds for the neighborhoods
/// N(p; sqrt(delta), B) around a separated set. Dimension 1 to 3.
[[nodiscard]] VolumeSandwich volume_sandwich(const std::vector<Vector>& packed, double delta,
                                             double kappa, double mu, const geometry::PointSet& B,
                                             int samples, std::uint64_t seed);

/// Mu choice for certification: mu* of kappa_tau unless a value is given.
struct MuPolicy {
  std::optional<double> fixed;
  static MuPolicy star() { return {}; }
  static MuPolicy value(double mu) { return {mu}; }
};

/// Trajectory data that does not depend on mu.
struct RunAnalysis {
  int n = 0;
  int horizon = 0;
  int tau = 0;
  DisturbanceSet disturbances;
  geometry::PointSet W = geometry::PointSet::empty(1);
  geometry::PointSet x_tau_cols = geometry::PointSet::empty(1);  // X_{tau-1}
  std::vector<Vector> states;
  std::vector<double> kappa;          // kappa_t = ||W||_{X_{t-1}}, t = 0 .. T
  std::vector<double> state_norm;     // ||x_t||_W, t = 0 .. T
  std::vector<double> input_norm;     // ||u_t||_W, t = 0 .. T-1
  std::vector<double> state_norm_x;   // ||x_t||_{X_{t-1}}, t = 0 .. T-1
  std::vector<double> lambda_l1;      // ||lambda_t||_1, t = 0 .. T-1
  std::vector<double> state_2norm;
  std::vector<double> input_2norm;
  double kappa_tau = 0.0;
  double a0_norm = 0.0;               // ||A0||_W
  double x_tau_bound_norm = 0.0;      // ||x_tau||_W, or ||A0 x_0||_W (see below)
  bool x0_norm_substituted = false; // tau = 0 and x_0 outside span(W)
  double closed_loop_residual = 0.0;  // max ||x_{t+1} + W_{t-1} lambda_t - w_t||_inf
  double deadbeat_residual = 0.0;     // max ||u_t + A0 x_t + W_{t-1} lambda_t||_inf
  double identity_scale = 1.0;
};

/// `init` is the bank the trajectory was produced from.
[[nodiscard]] RunAnalysis analyze_run(const plant::Trajectory& traj, const Matrix& a0,
                                      const controller::DataBank& init, int tau);

struct Verdict {
  std::string name;
  bool passed = false;
  bool approximate = false;
  std::string detail;
};

struct CertificationReport {
  int n = 0;
  int horizon = 0;
  int tau = 0;
  std::vector<double> kappa;
  double kappa_tau = 0.0;
  MuInterval interval;
  double mu_star = 0.0;
  double m_kappa = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  bool mu_valid = false;
  double n_bound = 0.0;

  std::vector<int> transition_times;
  std::vector<Vector> unstable_states;  // X_mu, distinct
  std::vector<Vector> projected;        // P_mu

  std::vector<double> state_norm;
  std::vector<double> input_norm;
  std::vector<double> v1;
  std::vector<double> v2;

  int t_prime = 0;
  double limsup_value = 0.0;
  double limsup_threshold = 0.0;

  double f = 0.0;
  double g = 0.0;
  double worst_case = 0.0;
  double max_state_norm = 0.0;
  bool x0_norm_substituted = false;
  double a0_norm = 0.0;
  double input_constant = 0.0;  // ||A0||_W + kappa_tau
  double max_input_norm = 0.0;

  double alpha = 1.0;
  double beta = 0.0;
  double v2_after_last = 0.0;

  double closed_loop_residual = 0.0;
  double deadbeat_residual = 0.0;

  std::vector<Verdict> verdicts;

  [[nodiscard]] bool all_passed() const;
  /// Throws std::out_of_range for an unknown name.
  [[nodiscard]] const Verdict& verdict(const std::string& name) const;
};

/// Verdict names, in report order.
[[nodiscard]] const std::vector<std::string>& verdict_names();

[[nodiscard]] CertificationReport certify(const RunAnalysis& run, const MuPolicy& policy);

[[nodiscard]] CertificationReport certify(const plant::Trajectory& traj, const Matrix& a0,
                                          const controller::DataBank& init, int tau,
                                          const MuPolicy& policy = MuPolicy::star());

/// Time after the last mu-unstable transition at or after tau (tau if none).
[[nodiscard]] int settling_time(const std::vector<int>& transition_times, int tau);

void write_report_text(std::ostream& os, const CertificationReport& report);
/// One CSV row per verdict: "verdict,passed,approximate,detail".
void write_report_csv(std::ostream& os, const CertificationReport& report);

}  // namespace ccc::analysis
