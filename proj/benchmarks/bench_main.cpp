#include <benchmark/benchmark.h>

#include "ccc/analysis.hpp"
#include "ccc/controller.hpp"
#include "ccc/convex_geometry.hpp"
#include "ccc/linprog.hpp"
#include "ccc/plant.hpp"
#include "ccc/random.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(ccc::Rng& rng, int n, int m) {
  MatrixXd X(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) X(i, j) = rng.gaussian();
  }
  return X;
}

void BM_MinL1Solve(benchmark::State& state) {
  ccc::Rng rng(1);
  const int m = static_cast<int>(state.range(0));
  const MatrixXd X = random_matrix(rng, 3, m);
  const VectorXd x = rng.gaussian_vector(3);
  for (auto _ : state) benchmark::DoNotOptimize(ccc::linprog::min_l1_solve(X, x));
}
BENCHMARK(BM_MinL1Solve)->Arg(3)->Arg(10)->Arg(43)->Arg(100);

void BM_GaugeNorm(benchmark::State& state) {
  ccc::Rng rng(2);
  const ccc::geometry::PointSet S(random_matrix(rng, 3, static_cast<int>(state.range(0))));
  const VectorXd x = rng.gaussian_vector(3);
  for (auto _ : state) benchmark::DoNotOptimize(ccc::geometry::gauge_norm(S, x));
}
BENCHMARK(BM_GaugeNorm)->Arg(6)->Arg(43);

void BM_PairDistance(benchmark::State& state) {
  ccc::Rng rng(3);
  const ccc::geometry::PointSet B(random_matrix(rng, 2, 4));
  const VectorXd x = rng.gaussian_vector(2);
  const VectorXd y = rng.gaussian_vector(2);
  for (auto _ : state) benchmark::DoNotOptimize(ccc::geometry::pair_distance(x, y, B));
}
BENCHMARK(BM_PairDistance);

void BM_ClosedLoop(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto plant = ccc::plant::reference_plant();
  const auto w = ccc::plant::DisturbanceModel::uniform_box(VectorXd::Ones(3), 4).generate(3, T);
  const VectorXd x0 = VectorXd::Ones(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ccc::plant::run_closed_loop(plant, ccc::controller::init_no_prior(3), w, x0, T));
  }
}
BENCHMARK(BM_ClosedLoop)->Arg(40)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Certify(benchmark::State& state) {
  const auto plant = ccc::plant::reference_plant();
  const auto init = ccc::controller::init_no_prior(3);
  const auto w = ccc::plant::DisturbanceModel::uniform_box(VectorXd::Ones(3), 5).generate(3, 40);
  const auto traj = ccc::plant::run_closed_loop(plant, init, w, VectorXd::Ones(3), 40).first;
  for (auto _ : state) benchmark::DoNotOptimize(ccc::analysis::certify(traj, plant.a0(), init, 0));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
