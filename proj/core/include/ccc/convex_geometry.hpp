#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ccc/extended_real.hpp"

namespace ccc::geometry {

using Vector = Eigen::VectorXd;

/// Finite generator set S. It stands for the absolute convex hull C(S), the
/// convex hull of S and -S, which is the unit ball of the gauge norm ||.||_S.
class PointSet {
 public:
  /// Each column of `generators` is one point. Entries must be finite.
  explicit PointSet(Eigen::MatrixXd generators);
  static PointSet from_points(const std::vector<Vector>& points, int dim);
  static PointSet empty(int dim);

  [[nodiscard]] int dim() const { return static_cast<int>(generators_.rows()); }
  [[nodiscard]] int size() const { return static_cast<int>(generators_.cols()); }
  [[nodiscard]] bool is_empty() const { return generators_.cols() == 0; }
  [[nodiscard]] const Eigen::MatrixXd& generators() const { return generators_; }
  [[nodiscard]] Vector point(int i) const { return generators_.col(i); }

  /// S union {p}, with p appended as the last generator.
  [[nodiscard]] PointSet with_point(const Vector& p) const;
  /// factor * S.
  [[nodiscard]] PointSet scaled(double factor) const;

 private:
  Eigen::MatrixXd generators_;
};

/// ||x||_S: smallest r >= 0 with x in r*C(S), or infinity outside span(S).
[[nodiscard]] ExtendedReal gauge_norm(const PointSet& S, const Vector& x);

/// ||S1||_S2: smallest r with C(S1) contained in r*C(S2). Evaluated as the max
/// of gauge_norm(S2, p) over the generators p of S1. Rejects empty sets.
[[nodiscard]] ExtendedReal set_gauge(const PointSet& S1, const PointSet& S2);

/// Multiplicative distance d(x, y; B) = max{||B+x||_{B+y}, ||B+y||_{B+x}}.
///
/// Every generator of B has gauge at most one in both augmented sets and the
/// distance is never below one, so only the two new points need an LP:
/// d = max{1, ||x||_{B+y}, ||y||_{B+x}}.
[[nodiscard]] ExtendedReal pair_distance(const Vector& x, const Vector& y, const PointSet& B);

/// d(S1, S2) = max{||S1||_S2, ||S2||_S1}.
[[nodiscard]] ExtendedReal set_distance(const PointSet& S1, const PointSet& S2);

/// x in C(S), i.e. ||x||_S <= 1 + tol.
[[nodiscard]] bool membership(const PointSet& S, const Vector& x, double tol = 1e-9);

/// q in N(p; eps, B) = {q : d(p, q; B) <= eps}.
[[nodiscard]] bool neighborhood_contains(const Vector& p, double eps, const PointSet& B,
                                         const Vector& q);

/// Every pair of distinct entries (by index) has d(p, p'; B) > eps.
[[nodiscard]] bool is_separated(const std::vector<Vector>& points, double eps, const PointSet& B);

/// Greedy (eps; B)-separated subset, scanning candidates in order.
[[nodiscard]] std::vector<Vector> greedy_packing(const std::vector<Vector>& candidates, double eps,
                                                 const PointSet& B);

/// Size of greedy_packing(): a lower bound on the eps-packing number.
[[nodiscard]] int greedy_packing_count(const std::vector<Vector>& candidates, double eps,
                                       const PointSet& B);

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

inline constexpr int kDefaultVolumeSamples = 200000;

/// Monte-Carlo volume of {q in box : inside(q)} with uniform samples from the
/// axis-aligned box [lo, hi].
[[nodiscard]] VolumeEstimate estimate_volume_in_box(const std::function<bool(const Vector&)>& inside,
                                                    const Vector& lo, const Vector& hi, int samples,
                                                    std::uint64_t seed);

/// Vol(C(S)) for dim(S) in {1, 2, 3}, sampling the bounding box of +-S.
/// Throws std::invalid_argument when C(S) is not full-dimensional.
[[nodiscard]] VolumeEstimate estimate_volume(const PointSet& S, int samples, std::uint64_t seed);

/// Per-axis max |p_i| over the generators: C(S) lies in [-h, h].
[[nodiscard]] Vector bounding_half_widths(const PointSet& S);

}  // namespace ccc::geometry
