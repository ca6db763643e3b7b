#include "ccc/convex_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ccc/linprog.hpp"
#include "ccc/random.hpp"

namespace ccc::geometry {

namespace {

void require_dim(const PointSet& S, const Vector& x, const char* what) {
  if (x.size() != S.dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

PointSet::PointSet(Eigen::MatrixXd generators) : generators_(std::move(generators)) {
  if (generators_.rows() < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
  linprog::require_finite(generators_, "PointSet");
}

PointSet PointSet::from_points(const std::vector<Vector>& points, int dim) {
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw std::invalid_argument("PointSet: point dimension mismatch");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return PointSet(std::move(m));
}

PointSet PointSet::empty(int dim) { return PointSet(Eigen::MatrixXd(dim, 0)); }

PointSet PointSet::with_point(const Vector& p) const {
  if (p.size() != dim()) throw std::invalid_argument("PointSet::with_point: dimension mismatch");
  Eigen::MatrixXd m(dim(), size() + 1);
  m.leftCols(size()) = generators_;
  m.col(size()) = p;
  return PointSet(std::move(m));
}

PointSet PointSet::scaled(double factor) const { return PointSet(generators_ * factor); }

ExtendedReal gauge_norm(const PointSet& S, const Vector& x) {
  require_dim(S, x, "gauge_norm");
  const auto sol = linprog::min_l1_solve(S.generators(), x);
  if (!sol.optimal()) return ExtendedReal::infinity();
  return ExtendedReal(sol.objective);
}

ExtendedReal set_gauge(const PointSet& S1, const PointSet& S2) {
  if (S1.dim() != S2.dim()) throw std::invalid_argument("set_gauge: dimension mismatch");
  if (S1.is_empty() || S2.is_empty()) throw std::invalid_argument("set_gauge: empty point set");
  ExtendedReal best(0.0);
  for (int i = 0; i < S1.size(); ++i) {
    best = max(best, gauge_norm(S2, S1.point(i)));
    if (best.is_infinite()) break;
  }
  return best;
}

ExtendedReal pair_distance(const Vector& x, const Vector& y, const PointSet& B) {
  require_dim(B, x, "pair_distance");
  require_dim(B, y, "pair_distance");
  const ExtendedReal xy = gauge_norm(B.with_point(y), x);
  if (xy.is_infinite()) return xy;
  const ExtendedReal yx = gauge_norm(B.with_point(x), y);
  return max(ExtendedReal(1.0), max(xy, yx));
}

ExtendedReal set_distance(const PointSet& S1, const PointSet& S2) {
  const ExtendedReal a = set_gauge(S1, S2);
  if (a.is_infinite()) return a;
  return max(a, set_gauge(S2, S1));
}

bool membership(const PointSet& S, const Vector& x, double tol) {
  return gauge_norm(S, x) <= ExtendedReal(1.0 + tol);
}

bool neighborhood_contains(const Vector& p, double eps, const PointSet& B, const Vector& q) {
  return pair_distance(p, q, B) <= ExtendedReal(eps);
}

bool is_separated(const std::vector<Vector>& points, double eps, const PointSet& B) {
  const ExtendedReal level(eps);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (!(pair_distance(points[i], points[j], B) > level)) return false;
    }
  }
  return true;
}

std::vector<Vector> greedy_packing(const std::vector<Vector>& candidates, double eps,
                                   const PointSet& B) {
  const ExtendedReal level(eps);
  std::vector<Vector> packed;
  for (const auto& c : candidates) {
    bool ok = true;
    for (const auto& p : packed) {
      if (!(pair_distance(c, p, B) > level)) {
        ok = false;
        break;
      }
    }
    if (ok) packed.push_back(c);
  }
  return packed;
}

int greedy_packing_count(const std::vector<Vector>& candidates, double eps, const PointSet& B) {
  return static_cast<int>(greedy_packing(candidates, eps, B).size());
}

VolumeEstimate estimate_volume_in_box(const std::function<bool(const Vector&)>& inside,
                                      const Vector& lo, const Vector& hi, int samples,
                                      std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("estimate_volume: need at least two samples");
  if (lo.size() != hi.size()) throw std::invalid_argument("estimate_volume: box mismatch");
  double box_volume = 1.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) box_volume *= hi(i) - lo(i);
  if (!(box_volume > 0.0)) throw std::invalid_argument("estimate_volume: empty box");

  Rng rng(seed);
  Vector q(lo.size());
  long hits = 0;
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < lo.size(); ++i) q(i) = rng.uniform(lo(i), hi(i));
    if (inside(q)) ++hits;
  }
  const double frac = static_cast<double>(hits) / samples;
  VolumeEstimate est;
  est.volume = box_volume * frac;
  est.std_error = box_volume * std::sqrt(frac * (1.0 - frac) / samples);
  est.samples = samples;
  return est;
}

Vector bounding_half_widths(const PointSet& S) {
  if (S.is_empty()) return Vector::Zero(S.dim());
  return S.generators().cwiseAbs().rowwise().maxCoeff();
}

VolumeEstimate estimate_volume(const PointSet& S, int samples, std::uint64_t seed) {
  if (S.dim() < 1 || S.dim() > 3) {
    throw std::invalid_argument("estimate_volume: only dimensions 1 to 3 are supported");
  }
  if (S.is_empty() || linprog::numeric_rank(S.generators()) < S.dim()) {
    throw std::invalid_argument("estimate_volume: hull is not full-dimensional");
  }
  const Vector h = bounding_half_widths(S);
  return estimate_volume_in_box([&S](const Vector& q) { return membership(S, q, 0.0); }, -h, h,
                                samples, seed);
}

}  // namespace ccc::geometry
