#pragma once

#include <Eigen/Dense>

namespace ccc::linprog {

/// Columns are data points. Entries must be finite.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-9;

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector coefficients;  // one entry per column of the constraint matrix
  double objective = 0.0;

  [[nodiscard]] bool optimal() const { return status == LpStatus::Optimal; }
};

/// Solves  min ||lambda||_1  s.t.  X * lambda = x.
///
/// The problem is split as lambda = p - q with p, q >= 0 and handed to a dense
/// two-phase simplex that uses Bland's rule throughout. Columns are visited in
/// the order (p_0, ..., p_{m-1}, q_0, ..., q_{m-1}), so among several minimizers
/// the one built from the lowest column indices of X wins. The right-hand side
/// is normalized to unit max-norm before solving; `tol` bounds the residual
/// ||X lambda - x||_inf relative to max(1, ||x||_inf).
///
/// Returns Infeasible when x is not in the column span of X.
/// Throws std::invalid_argument on non-finite input, a row-count mismatch, or
/// tol <= 0.
[[nodiscard]] LpSolution min_l1_solve(const DenseMatrix& X, const Vector& x,
                                      double tol = kDefaultTolerance);

/// Number of singular values above tol * (largest singular value).
[[nodiscard]] int numeric_rank(const DenseMatrix& X, double tol = kDefaultTolerance);

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const DenseMatrix& M, const char* what);

}  // namespace ccc::linprog
