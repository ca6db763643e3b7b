#include "ccc/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccc::linprog {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr double kRatioTieTol = 1e-12;
// Phase-1 optimum below rows * kPhaseOneTol counts as feasible.
constexpr double kPhaseOneTol = 1e-9;

// Dense simplex tableau. Row i holds the constraint coefficients followed by
// the right-hand side; `cost` is the reduced-cost row with -objective in the
// last slot.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), width_(cols + 1), data_(static_cast<std::size_t>(rows) * width_, 0.0),
        cost_(width_, 0.0), basis_(rows, -1), active_(rows, true) {}

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * width_ + j]; }
  double& rhs(int i) { return at(i, width_ - 1); }
  double rhs(int i) const { return at(i, width_ - 1); }
  double& cost(int j) { return cost_[j]; }

  int rows() const { return rows_; }
  int cols() const { return width_ - 1; }
  int& basis(int i) { return basis_[i]; }
  int basis(int i) const { return basis_[i]; }
  bool active(int i) const { return active_[i]; }
  void deactivate(int i) { active_[i] = false; }

  void pivot(int r, int c) {
    double* prow = &data_[static_cast<std::size_t>(r) * width_];
    const double inv = 1.0 / prow[c];
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || !active_[i]) continue;
      double* row = &data_[static_cast<std::size_t>(i) * width_];
      const double f = row[c];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    const double f = cost_[c];
    if (f != 0.0) {
      for (int j = 0; j < width_; ++j) cost_[j] -= f * prow[j];
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Bland's rule on columns [0, entering_limit). Returns false when optimal.
  // The objective is bounded below by zero in both phases, so an improving
  // column without an eligible pivot row is round-off; it is skipped.
  bool step(int entering_limit) {
    for (int enter = 0; enter < entering_limit; ++enter) {
      if (cost_[enter] >= -kCostTol) continue;
      const int leave = ratio_test(enter);
      if (leave < 0) continue;
      pivot(leave, enter);
      return true;
    }
    return false;
  }

  void run(int entering_limit) {
    const long max_iterations = 200L * (cols() + rows_ + 1);
    for (long it = 0; it < max_iterations; ++it) {
      if (!step(entering_limit)) return;
    }
    throw std::runtime_error("min_l1_solve: simplex iteration limit reached");
  }

 private:
  int ratio_test(int enter) const {
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (!active_[i]) continue;
      const double a = at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = rhs(i) / a;
      if (leave < 0) {
        leave = i;
        best = ratio;
        continue;
      }
      const double slack = kRatioTieTol * std::max(1.0, std::abs(best));
      if (ratio < best - slack || (ratio <= best + slack && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    return leave;
  }

  int rows_;
  int width_;
  std::vector<double> data_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<bool> active_;
};

double max_residual(const DenseMatrix& X, const Vector& lambda, const Vector& b) {
  return (X * lambda - b).lpNorm<Eigen::Infinity>();
}

}  // namespace

void require_finite(const DenseMatrix& M, const char* what) {
  if (!M.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

LpSolution min_l1_solve(const DenseMatrix& X, const Vector& x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("min_l1_solve: tol must be positive");
  if (X.rows() < 1) throw std::invalid_argument("min_l1_solve: matrix needs at least one row");
  if (X.rows() != x.size()) throw std::invalid_argument("min_l1_solve: dimension mismatch");
  require_finite(X, "min_l1_solve: matrix");
  require_finite(x, "min_l1_solve: right-hand side");

  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X.cols());

  LpSolution out;
  const double scale = x.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) {
    out.status = LpStatus::Optimal;
    out.coefficients = Vector::Zero(m);
    out.objective = 0.0;
    return out;
  }
  if (m == 0) {
    out.coefficients = Vector::Zero(0);
    return out;
  }

  const Vector b = x / scale;

  // Equilibrate columns to unit max-norm; the l1 weights move into the costs.
  Vector col_norm(m);
  for (int j = 0; j < m; ++j) {
    const double c = X.col(j).lpNorm<Eigen::Infinity>();
    col_norm(j) = c > 0.0 ? c : 1.0;
  }
  const double min_norm = col_norm.minCoeff();
  const DenseMatrix Xs = X * col_norm.cwiseInverse().asDiagonal();

  const int structural = 2 * m;
  Tableau tab(n, structural + n);
  for (int i = 0; i < n; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < m; ++j) {
      tab.at(i, j) = sign * Xs(i, j);
      tab.at(i, m + j) = -sign * Xs(i, j);
    }
    tab.at(i, structural + i) = 1.0;
    tab.rhs(i) = sign * b(i);
    tab.basis(i) = structural + i;
  }

  // Phase 1: minimize the sum of artificials.
  for (int j = 0; j <= structural + n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += tab.at(i, j);
    tab.cost(j) = (j >= structural && j < structural + n) ? 0.0 : -s;
  }
  tab.run(structural + n);
  const auto weight = [&](int j) { return min_norm / col_norm(j % m); };

  double infeasibility = 0.0;
  for (int i = 0; i < n; ++i) {
    if (tab.basis(i) >= structural) infeasibility += std::abs(tab.rhs(i));
  }
  if (infeasibility > n * kPhaseOneTol) {
    out.coefficients = Vector::Zero(m);
    return out;
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are linearly dependent and get dropped.
  for (int i = 0; i < n; ++i) {
    if (tab.basis(i) < structural) continue;
    int col = -1;
    for (int j = 0; j < structural; ++j) {
      if (std::abs(tab.at(i, j)) > kPivotTol) {
        col = j;
        break;
      }
    }
    tab.rhs(i) = 0.0;
    if (col < 0) {
      tab.deactivate(i);
    } else {
      tab.pivot(i, col);
    }
  }

  // Phase 2: cost min_norm / |X_j| on both copies of column j, which is the
  // l1 objective in unscaled coordinates up to a positive factor.
  for (int j = 0; j <= structural + n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (tab.active(i) && tab.basis(i) < structural) s += weight(tab.basis(i)) * tab.at(i, j);
    }
    tab.cost(j) = (j < structural ? weight(j) : 0.0) - s;
  }
  tab.run(structural);

  Vector lambda = Vector::Zero(m);
  std::vector<int> rows;
  std::vector<int> cols;
  for (int i = 0; i < n; ++i) {
    if (!tab.active(i)) continue;
    const int c = tab.basis(i);
    const double v = tab.rhs(i) / col_norm(c % m);
    if (c < m) {
      lambda(c) += v;
    } else {
      lambda(c - m) -= v;
    }
    rows.push_back(i);
    cols.push_back(c);
  }

  // Re-solve the final basis against the original rows to shed tableau
  // round-off; keep whichever of the two solutions fits better.
  double residual = max_residual(X, lambda, b);
  if (!rows.empty()) {
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd basis_matrix(k, k);
    Eigen::VectorXd rhs(k);
    for (int r = 0; r < k; ++r) {
      rhs(r) = b(rows[r]);
      for (int c = 0; c < k; ++c) {
        const int col = cols[c];
        basis_matrix(r, c) = col < m ? X(rows[r], col) : -X(rows[r], col - m);
      }
    }
    const Eigen::VectorXd v = basis_matrix.colPivHouseholderQr().solve(rhs);
    if (v.allFinite()) {
      Vector refined = Vector::Zero(m);
      for (int c = 0; c < k; ++c) {
        const int col = cols[c];
        if (col < m) {
          refined(col) += v(c);
        } else {
          refined(col - m) -= v(c);
        }
      }
      const double refined_residual = max_residual(X, refined, b);
      if (refined_residual <= residual) {
        lambda = refined;
        residual = refined_residual;
      }
    }
  }

  if (residual > tol) {
    out.coefficients = Vector::Zero(m);
    return out;
  }

  out.status = LpStatus::Optimal;
  out.coefficients = lambda * scale;
  out.objective = out.coefficients.lpNorm<1>();
  return out;
}

int numeric_rank(const DenseMatrix& X, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numeric_rank: tol must be positive");
  require_finite(X, "numeric_rank");
  if (X.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace ccc::linprog
