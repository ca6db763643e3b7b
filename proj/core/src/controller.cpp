#include "ccc/controller.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "ccc/csv.hpp"
#include "ccc/linprog.hpp"

namespace ccc::controller {

namespace {

void prepend_column(Matrix& m, const Vector& v) {
  const Eigen::Index cols = m.cols();
  Matrix grown(m.rows(), cols + 1);
  grown.col(0) = v;
  grown.rightCols(cols) = m;
  m = std::move(grown);
}

void require_dim(const Vector& v, int n, const char* what) {
  if (v.size() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

DataBank::DataBank(Matrix init_states, Matrix init_inputs, Matrix init_successors)
    : states_(std::move(init_states)),
      inputs_(std::move(init_inputs)),
      successors_(std::move(init_successors)),
      n0_(static_cast<int>(states_.cols())) {
  const auto n = states_.rows();
  if (n < 1) throw std::invalid_argument("DataBank: state dimension must be >= 1");
  if (inputs_.rows() != n || successors_.rows() != n || inputs_.cols() != n0_ ||
      successors_.cols() != n0_) {
    throw std::invalid_argument("DataBank: initialization matrices disagree in shape");
  }
  linprog::require_finite(states_, "DataBank");
  linprog::require_finite(inputs_, "DataBank");
  linprog::require_finite(successors_, "DataBank");
  if (linprog::numeric_rank(states_) != n) {
    throw std::invalid_argument("DataBank: initial state columns must have rank n");
  }
}

void DataBank::append(const Vector& x, const Vector& u, const Vector& x_next) {
  require_dim(x, dim(), "DataBank::append x");
  require_dim(u, dim(), "DataBank::append u");
  require_dim(x_next, dim(), "DataBank::append x_next");
  prepend_column(states_, x);
  prepend_column(inputs_, u);
  prepend_column(successors_, x_next);
}

DataBank DataBank::initial() const {
  return DataBank(init_states(), init_inputs(), init_successors());
}

DataBank init_no_prior(int n, double eps) { return init_with_data(n, eps, {}); }

DataBank init_with_data(int n, double eps, const std::vector<PriorSample>& prior) {
  if (n < 1) throw std::invalid_argument("init: dimension must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("init: eps must be positive");
  const int n0 = n + static_cast<int>(prior.size());
  Matrix X = Matrix::Zero(n, n0);
  Matrix U = Matrix::Zero(n, n0);
  Matrix Xp = Matrix::Zero(n, n0);
  X.leftCols(n) = eps * Matrix::Identity(n, n);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(n + i);
    require_dim(prior[i].x, n, "init_with_data x");
    require_dim(prior[i].u, n, "init_with_data u");
    require_dim(prior[i].x_next, n, "init_with_data x_next");
    X.col(col) = prior[i].x;
    U.col(col) = prior[i].u;
    Xp.col(col) = prior[i].x_next;
  }
  return DataBank(std::move(X), std::move(U), std::move(Xp));
}

ControlDecision control(const DataBank& bank, const Vector& x) {
  require_dim(x, bank.dim(), "control");
  auto sol = linprog::min_l1_solve(bank.states(), x);
  if (!sol.optimal()) {
    throw std::logic_error("control: state outside the span of the data matrix");
  }
  ControlDecision d;
  d.u = (bank.inputs() - bank.successors()) * sol.coefficients;
  d.l1_value = sol.objective;
  d.lambda = std::move(sol.coefficients);
  return d;
}

DataBank update(DataBank bank, const Vector& x, const Vector& u, const Vector& x_next) {
  bank.append(x, u, x_next);
  return bank;
}

void write_record(std::ostream& os, const DataBank& bank) {
  const int n = bank.dim();
  const int k = bank.time();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",u" << i;
  os << '\n';
  for (int t = 0; t < k; ++t) {
    const int col = k - 1 - t;
    os << t;
    for (int i = 0; i < n; ++i) os << ',' << csv::format_double(bank.states()(i, col));
    for (int i = 0; i < n; ++i) os << ',' << csv::format_double(bank.inputs()(i, col));
    os << '\n';
  }
  if (k > 0) {
    os << k;
    for (int i = 0; i < n; ++i) os << ',' << csv::format_double(bank.successors()(i, 0));
    for (int i = 0; i < n; ++i) os << ',';
    os << '\n';
  }
}

DataBank replay_record(DataBank initial, std::istream& is) {
  const int n = initial.dim();
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("replay_record: empty record");
  const auto header = csv::split(line);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  auto column = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("replay_record: missing column " + name);
    return it->second;
  };
  std::vector<std::size_t> xcol(n);
  std::vector<std::size_t> ucol(n);
  for (int i = 0; i < n; ++i) {
    xcol[i] = column("x" + std::to_string(i + 1));
    ucol[i] = column("u" + std::to_string(i + 1));
  }

  std::vector<Vector> xs;
  std::vector<Vector> us;
  while (std::getline(is, line)) {
    if (csv::is_blank(line)) continue;
    const auto f = csv::split(line);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = csv::parse_double(f.at(xcol[i]));
    xs.push_back(x);
    if (ucol[0] < f.size() && !csv::is_blank(f[ucol[0]])) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u(i) = csv::parse_double(f.at(ucol[i]));
      us.push_back(u);
    }
  }
  if (!xs.empty() && us.size() + 1 < xs.size()) {
    throw std::invalid_argument("replay_record: missing inputs");
  }
  DataBank bank = std::move(initial);
  for (std::size_t t = 0; t + 1 < xs.size() && t < us.size(); ++t) {
    bank.append(xs[t], us[t], xs[t + 1]);
  }
  return bank;
}

}  // namespace ccc::controller
