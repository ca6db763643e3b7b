#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace ccc {

/// Seeded generator with a platform-independent stream: mt19937_64 for raw
/// bits, explicit 53-bit uniform conversion and Box-Muller for gaussians (the
/// std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Eigen::VectorXd gaussian_vector(int n, double sigma = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = sigma * gaussian();
    return v;
  }

  Eigen::VectorXd uniform_vector(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Per-run seed for batch studies.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run_index) {
  return seed ^ run_index;
}

}  // namespace ccc
