#include "ccc/plant.hpp"

#include <stdexcept>
#include <string>

#include "ccc/linprog.hpp"
#include "ccc/random.hpp"

namespace ccc::plant {

namespace {

void require_dim(const Vector& v, int n, const char* what) {
  if (v.size() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

LinearPlant::LinearPlant(Matrix a0) : a0_(std::move(a0)) {
  if (a0_.rows() < 1 || a0_.rows() != a0_.cols()) {
    throw std::invalid_argument("LinearPlant: A0 must be square and non-empty");
  }
  linprog::require_finite(a0_, "LinearPlant");
}

DisturbanceModel DisturbanceModel::zero() { return {}; }

DisturbanceModel DisturbanceModel::uniform_box(Vector half_widths, std::uint64_t seed) {
  if (half_widths.size() == 0 || !(half_widths.array() > 0.0).all() || !half_widths.allFinite()) {
    throw std::invalid_argument("uniform_box: half-widths must be positive and finite");
  }
  DisturbanceModel m;
  m.kind_ = DisturbanceKind::UniformBox;
  m.half_widths_ = std::move(half_widths);
  m.seed_ = seed;
  return m;
}

DisturbanceModel DisturbanceModel::explicit_sequence(std::vector<Vector> sequence) {
  for (const auto& w : sequence) {
    if (!w.allFinite()) throw std::invalid_argument("explicit_sequence: non-finite disturbance");
  }
  DisturbanceModel m;
  m.kind_ = DisturbanceKind::Explicit;
  m.sequence_ = std::move(sequence);
  return m;
}

std::vector<Vector> DisturbanceModel::generate(int n, int T) const {
  std::vector<Vector> out;
  out.reserve(T);
  switch (kind_) {
    case DisturbanceKind::Zero:
      for (int t = 0; t < T; ++t) out.push_back(Vector::Zero(n));
      break;
    case DisturbanceKind::UniformBox: {
      require_dim(half_widths_, n, "DisturbanceModel::generate");
      Rng rng(seed_);
      for (int t = 0; t < T; ++t) {
        Vector w(n);
        for (int i = 0; i < n; ++i) w(i) = rng.uniform(-half_widths_(i), half_widths_(i));
        out.push_back(w);
      }
      break;
    }
    case DisturbanceKind::Explicit:
      if (static_cast<int>(sequence_.size()) < T) {
        throw std::invalid_argument("DisturbanceModel::generate: explicit sequence too short");
      }
      for (int t = 0; t < T; ++t) {
        require_dim(sequence_[t], n, "DisturbanceModel::generate");
        out.push_back(sequence_[t]);
      }
      break;
  }
  return out;
}

std::vector<Vector> lump(const std::vector<Vector>& d, const std::vector<Vector>& noise,
                         const Matrix& a0) {
  if (noise.size() != d.size() + 1) {
    throw std::invalid_argument("lump: noise needs exactly one more entry than d");
  }
  std::vector<Vector> w;
  w.reserve(d.size());
  for (std::size_t t = 0; t < d.size(); ++t) {
    w.push_back(d[t] + noise[t + 1] - a0 * noise[t]);
  }
  return w;
}

Vector step(const LinearPlant& plant, const Vector& x, const Vector& u, const Vector& w) {
  require_dim(x, plant.dim(), "step x");
  require_dim(u, plant.dim(), "step u");
  require_dim(w, plant.dim(), "step w");
  return plant.a0() * x + u + w;
}

std::pair<Trajectory, controller::DataBank> run_closed_loop(const LinearPlant& plant,
                                                            controller::DataBank bank,
                                                            const std::vector<Vector>& w,
                                                            const Vector& x0, int T) {
  if (T < 1) throw std::invalid_argument("run_closed_loop: horizon must be >= 1");
  if (static_cast<int>(w.size()) < T) {
    throw std::invalid_argument("run_closed_loop: disturbance sequence shorter than horizon");
  }
  if (bank.dim() != plant.dim()) throw std::invalid_argument("run_closed_loop: bank dimension");
  require_dim(x0, plant.dim(), "run_closed_loop x0");

  Trajectory traj;
  traj.states.reserve(T + 1);
  traj.states.push_back(x0);
  Vector x = x0;
  for (int t = 0; t < T; ++t) {
    auto decision = controller::control(bank, x);
    Vector next = step(plant, x, decision.u, w[t]);
    bank.append(x, decision.u, next);
    traj.inputs.push_back(decision.u);
    traj.disturbances.push_back(w[t]);
    traj.lambdas.push_back(std::move(decision.lambda));
    traj.states.push_back(next);
    x = std::move(next);
  }
  return {std::move(traj), std::move(bank)};
}

LinearPlant random_plant(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_plant: dimension must be >= 1");
  Rng rng(seed);
  Matrix a0(n, n);
  // Row-major fill so the stream order is independent of Eigen's storage.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a0(i, j) = rng.gaussian();
  }
  return LinearPlant(std::move(a0));
}

LinearPlant reference_plant() {
  Matrix a0(3, 3);
  a0 << 1.4, 0.2, 1.0,
        0.2, 1.3, 1.0,
        0.5, 0.3, 2.0;
  return LinearPlant(std::move(a0));
}

}  // namespace ccc::plant
