#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace ccc::controller {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultEps = 0.1;

/// One prior transition x_next = A0 x + u + w recorded before t = 0.
struct PriorSample {
  Vector x;
  Vector u;
  Vector x_next;
};

/// Data matrices of the causal cancellation controller.
///
/// Columns are stored newest first. After k calls to append():
///   states()     = [x_{k-1}, ..., x_0, X_init]
///   inputs()     = [u_{k-1}, ..., u_0, U_init]
///   successors() = [x_k, ..., x_1, Xplus_init]
/// so all three carry k + n0 columns and column j of successors() is the
/// state that followed column j of states() under input column j of inputs().
class DataBank {
 public:
  /// Throws std::invalid_argument if the initialization columns do not
  /// have full row rank n or the shapes disagree.
  DataBank(Matrix init_states, Matrix init_inputs, Matrix init_successors);

  [[nodiscard]] int dim() const { return static_cast<int>(states_.rows()); }
  [[nodiscard]] int init_columns() const { return n0_; }
  /// Number of appended transitions (the bank holds data through time()-1).
  [[nodiscard]] int time() const { return static_cast<int>(states_.cols()) - n0_; }

  [[nodiscard]] const Matrix& states() const { return states_; }
  [[nodiscard]] const Matrix& inputs() const { return inputs_; }
  [[nodiscard]] const Matrix& successors() const { return successors_; }

  [[nodiscard]] Matrix init_states() const { return states_.rightCols(n0_); }
  [[nodiscard]] Matrix init_inputs() const { return inputs_.rightCols(n0_); }
  [[nodiscard]] Matrix init_successors() const { return successors_.rightCols(n0_); }

  /// Records the transition (x_t, u_t) -> x_{t+1} as the newest column.
  void append(const Vector& x, const Vector& u, const Vector& x_next);

  /// The bank as it was right after initialization.
  [[nodiscard]] DataBank initial() const;

 private:
  Matrix states_;
  Matrix inputs_;
  Matrix successors_;
  int n0_ = 0;
};

struct ControlDecision {
  Vector u;
  Vector lambda;  // minimum 1-norm decomposition of x_t over states()
  double l1_value = 0.0;
};

/// X_init = eps * I, U_init = Xplus_init = 0.
[[nodiscard]] DataBank init_no_prior(int n, double eps = kDefaultEps);

/// The eps * I columns followed by one column per prior sample.
[[nodiscard]] DataBank init_with_data(int n, double eps, const std::vector<PriorSample>& prior);

/// u_t = (U_{t-1} - Xplus_{t-1}) * lambda where lambda minimizes ||lambda||_1
/// subject to X_{t-1} lambda = x_t. Does not modify the bank.
/// Throws std::logic_error if the LP is infeasible, which the rank invariant
/// of DataBank rules out.
[[nodiscard]] ControlDecision control(const DataBank& bank, const Vector& x);

/// Functional form of DataBank::append.
[[nodiscard]] DataBank update(DataBank bank, const Vector& x, const Vector& u,
                              const Vector& x_next);

/// Writes the experiment record "t,x1..xn,u1..un" for the appended data.
/// Row k holds x_k and u_k; the final row holds the last successor state with
/// empty input fields.
void write_record(std::ostream& os, const DataBank& bank);

/// Replays a record onto an initial bank. Columns are located by header name,
/// so extra columns (for example disturbances) are ignored.
[[nodiscard]] DataBank replay_record(DataBank initial, std::istream& is);

}  // namespace ccc::controller
