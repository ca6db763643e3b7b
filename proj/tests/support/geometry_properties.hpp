#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccc/convex_geometry.hpp"
#include "ccc/random.hpp"

namespace ccc::testing {

struct PropertyTally {
  int checked = 0;
  int failed = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      if (failed == 0) first_failure = what;
      ++failed;
    }
  }
};

using PropertyReport = std::map<std::string, PropertyTally>;

inline geometry::PointSet random_set(Rng& rng, int n, int extra) {
  const int m = n + extra;
  Eigen::MatrixXd G(n, m);
  for (int j = 0; j < m; ++j) G.col(j) = rng.gaussian_vector(n);
  return geometry::PointSet(G);
}

/// Random point of l1 * C(S).
inline Eigen::VectorXd random_member(Rng& rng, const geometry::PointSet& S, double l1 = 1.0) {
  Eigen::VectorXd c = rng.uniform_vector(S.size(), -1.0, 1.0);
  c *= l1 * rng.uniform01() / c.lpNorm<1>();
  return S.generators() * c;
}

inline bool rel_le(double a, double b, double tol = 1e-8) { return a <= b + tol * (1.0 + std::abs(b)); }
inline bool rel_eq(double a, double b, double tol = 1e-8) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline std::string describe(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "(" << v.transpose() << ")";
  return os.str();
}

/// Norm axioms, gauge properties, multiplicative distance and the ball/packing
/// facts on `samples` random instances in dimension n.
inline PropertyReport check_geometry_properties(int n, int samples, std::uint64_t seed) {
  using geometry::gauge_norm;
  using geometry::pair_distance;
  using geometry::set_gauge;
  Rng rng(seed);
  PropertyReport rep;
  for (int k = 0; k < samples; ++k) {
    const auto S = random_set(rng, n, static_cast<int>(rng.next_u64() % 4));
    const Eigen::VectorXd x = rng.gaussian_vector(n);
    const Eigen::VectorXd y = rng.gaussian_vector(n);
    const double c = rng.uniform(-5.0, 5.0);
    const double gx = gauge_norm(S, x).value();
    const double gy = gauge_norm(S, y).value();
    const std::string at = "sample " + std::to_string(k) + " x=" + describe(x);

    rep["homogeneity"].record(rel_eq(gauge_norm(S, c * x).value(), std::abs(c) * gx), at);
    rep["triangle"].record(rel_le(gauge_norm(S, x + y).value(), gx + gy), at);

    const Eigen::VectorXd inside = random_member(rng, S);
    const bool inside_ok = geometry::membership(S, inside);
    const bool outside_ok = !geometry::membership(S, 1.01 * x / gx, 1e-6);
    rep["membership"].record(inside_ok && outside_ok, at);

    const auto sub = [&] {
      Eigen::MatrixXd G(n, S.size() + 1);
      for (int j = 0; j < G.cols(); ++j) G.col(j) = random_member(rng, S);
      return geometry::PointSet(G);
    }();
    const auto gsub = gauge_norm(sub, x);
    rep["monotone_in_set"].record(gsub.is_infinite() || rel_le(gx, gsub.value()), at);

    const double gamma = rng.uniform(0.1, 10.0);
    rep["scaling_of_set"].record(rel_eq(gauge_norm(S.scaled(1.0 / gamma), x).value(), gamma * gx),
                                 at);

    const auto S2 = random_set(rng, n, static_cast<int>(rng.next_u64() % 4));
    const double g2 = gauge_norm(S2, x).value();
    const double s12 = set_gauge(S, S2).value();
    const double s21 = set_gauge(S2, S).value();
    rep["norm_equivalence"].record(rel_le(g2 / s12, gx) && rel_le(gx, s21 * g2), at);

    const auto B = random_set(rng, n, static_cast<int>(rng.next_u64() % 3));
    const Eigen::VectorXd z = rng.gaussian_vector(n);
    const double dxx = pair_distance(x, x, B).value();
    rep["distance_identity"].record(rel_eq(dxx, 1.0, 1e-9), at);

    const double dxy = pair_distance(x, y, B).value();
    const double dyx = pair_distance(y, x, B).value();
    const double dyneg = pair_distance(y, -x, B).value();
    rep["distance_symmetry"].record(rel_eq(dxy, dyx) && rel_eq(dxy, dyneg), at);

    const double dxz = pair_distance(x, z, B).value();
    const double dzy = pair_distance(z, y, B).value();
    rep["distance_triangle"].record(rel_le(dxy, dxz * dzy), at);

    const double eps = rng.uniform(1.01, 4.0);
    const Eigen::VectorXd p = random_member(rng, B);
    rep["ball"].record(rel_le(pair_distance(x, x + (eps - 1.0) * p, B).value(), eps), at);

    // Points between x and y are the likeliest to sit in both neighborhoods.
    if (dxy > 1.0 + 1e-6) {
      const double level = rng.uniform(1.0, dxy / (1.0 + 1e-6));
      const double r = std::sqrt(level);
      bool disjoint = true;
      for (int s = 0; s < 4 && disjoint; ++s) {
        const double t = rng.uniform01();
        const Eigen::VectorXd q = t * x + (1.0 - t) * y + 0.05 * rng.gaussian_vector(n);
        disjoint = !(geometry::neighborhood_contains(x, r, B, q) &&
                     geometry::neighborhood_contains(y, r, B, q));
      }
      rep["separated_neighborhoods"].record(disjoint, at);
    }
  }
  return rep;
}

}  // namespace ccc::testing
