#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccc/controller.hpp"

namespace ccc::plant {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// x' = A0 x + u + w. A0 is the ground truth and is never shown to the
/// controller.
class LinearPlant {
 public:
  explicit LinearPlant(Matrix a0);

  [[nodiscard]] int dim() const { return static_cast<int>(a0_.rows()); }
  [[nodiscard]] const Matrix& a0() const { return a0_; }

 private:
  Matrix a0_;
};

enum class DisturbanceKind { Zero, UniformBox, Explicit };

/// Source of the lumped disturbance sequence w_0, w_1, ...
class DisturbanceModel {
 public:
  static DisturbanceModel zero();
  /// w_{t,i} i.i.d. uniform on [-half_widths(i), half_widths(i)].
  static DisturbanceModel uniform_box(Vector half_widths, std::uint64_t seed);
  static DisturbanceModel explicit_sequence(std::vector<Vector> sequence);

  [[nodiscard]] DisturbanceKind kind() const { return kind_; }

  /// First T disturbances for an n-dimensional plant. Explicit sequences must
  /// contain at least T entries.
  [[nodiscard]] std::vector<Vector> generate(int n, int T) const;

 private:
  DisturbanceKind kind_ = DisturbanceKind::Zero;
  Vector half_widths_;
  std::vector<Vector> sequence_;
  std::uint64_t seed_ = 0;
};

struct Trajectory {
  std::vector<Vector> states;        // x_0 .. x_T
  std::vector<Vector> inputs;        // u_0 .. u_{T-1}
  std::vector<Vector> disturbances;  // w_0 .. w_{T-1}
  std::vector<Vector> lambdas;       // LP coefficients behind u_t

  [[nodiscard]] int horizon() const { return static_cast<int>(inputs.size()); }
  [[nodiscard]] int dim() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
};

/// w_t = d_t + n_{t+1} - A0 n_t. `noise` needs one more entry than `d`.
[[nodiscard]] std::vector<Vector> lump(const std::vector<Vector>& d,
                                       const std::vector<Vector>& noise, const Matrix& a0);

[[nodiscard]] Vector step(const LinearPlant& plant, const Vector& x, const Vector& u,
                          const Vector& w);

/// Iterates control -> step -> update for t = 0 .. T-1 starting from `bank`.
[[nodiscard]] std::pair<Trajectory, controller::DataBank> run_closed_loop(
    const LinearPlant& plant, controller::DataBank bank, const std::vector<Vector>& w,
    const Vector& x0, int T);

/// Entries i.i.d. N(0, 1).
[[nodiscard]] LinearPlant random_plant(int n, std::uint64_t seed);

/// The 3x3 test plant with eigenvalues near 2.7, 1.13 and 0.86.
[[nodiscard]] LinearPlant reference_plant();

}  // namespace ccc::plant
