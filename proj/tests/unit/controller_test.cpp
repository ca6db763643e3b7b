#include <sstream>

#include <gtest/gtest.h>

#include "ccc/analysis.hpp"
#include "ccc/controller.hpp"
#include "ccc/convex_geometry.hpp"
#include "ccc/plant.hpp"
#include "ccc/random.hpp"

using namespace ccc::controller;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd scalar(double v) { return VectorXd::Constant(1, v); }

}  // namespace

TEST(Init, NoPrior) {
  const auto bank = init_no_prior(3, 0.1);
  EXPECT_EQ(bank.dim(), 3);
  EXPECT_EQ(bank.init_columns(), 3);
  EXPECT_EQ(bank.time(), 0);
  EXPECT_TRUE(bank.states().isApprox(0.1 * MatrixXd::Identity(3, 3)));
  EXPECT_TRUE(bank.inputs().isZero());
  EXPECT_TRUE(bank.successors().isZero());

  const auto scalar_bank = init_no_prior(1, 1.0);
  EXPECT_EQ(scalar_bank.states()(0, 0), 1.0);
  EXPECT_EQ(scalar_bank.inputs()(0, 0), 0.0);
  EXPECT_EQ(scalar_bank.successors()(0, 0), 0.0);
}

TEST(Init, DefaultEps) { EXPECT_EQ(init_no_prior(2).states()(1, 1), 0.1); }

TEST(Init, RejectsBadArguments) {
  EXPECT_THROW((void)init_no_prior(2, 0.0), std::invalid_argument);
  EXPECT_THROW((void)init_no_prior(2, -1.0), std::invalid_argument);
  EXPECT_THROW((void)init_no_prior(0, 1.0), std::invalid_argument);
  EXPECT_THROW((void)init_with_data(2, 1.0, {{scalar(1), scalar(0), scalar(2)}}),
               std::invalid_argument);
  EXPECT_THROW(DataBank(MatrixXd::Ones(2, 2), MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)),
               std::invalid_argument);
}

TEST(Init, WithData) {
  const auto empty = init_with_data(2, 0.5, {});
  EXPECT_EQ(empty.states(), init_no_prior(2, 0.5).states());

  const auto bank = init_with_data(1, 1.0, {{scalar(1), scalar(0), scalar(2)}});
  EXPECT_EQ(bank.init_columns(), 2);
  EXPECT_EQ(bank.states(), (MatrixXd(1, 2) << 1, 1).finished());
  EXPECT_EQ(bank.inputs(), (MatrixXd(1, 2) << 0, 0).finished());
  EXPECT_EQ(bank.successors(), (MatrixXd(1, 2) << 0, 2).finished());
}

TEST(Init, PriorFromTruePlantHasZeroVirtualDisturbance) {
  ccc::Rng rng(2);
  const auto plant = ccc::plant::random_plant(3, 5);
  std::vector<PriorSample> prior;
  for (int k = 0; k < 4; ++k) {
    const VectorXd x = rng.gaussian_vector(3);
    const VectorXd u = rng.gaussian_vector(3);
    prior.push_back({x, u, plant.a0() * x + u});
  }
  const auto bank = init_with_data(3, 0.1, prior);
  const auto w = ccc::analysis::virtual_disturbances(plant.a0(), bank);
  ASSERT_EQ(w.size(), 7u);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(w[i].isApprox(-0.1 * plant.a0().col(i)));
  for (int i = 3; i < 7; ++i) EXPECT_LT(w[i].norm(), 1e-12);
}

TEST(Control, FirstInputIsZero) {
  ccc::Rng rng(3);
  for (int n = 1; n <= 4; ++n) {
    const auto bank = init_no_prior(n, rng.uniform(0.01, 2.0));
    const auto d = control(bank, rng.gaussian_vector(n));
    EXPECT_TRUE(d.u.isZero());
  }
}

TEST(Control, ScalarWalkthrough) {
  // a0 = 2, eps = 1, w = 0, x0 = 1.
  auto bank = init_no_prior(1, 1.0);
  const auto d0 = control(bank, scalar(1));
  EXPECT_EQ(d0.u(0), 0.0);
  const double x1 = 2.0 * 1.0 + d0.u(0);
  EXPECT_EQ(x1, 2.0);
  bank = update(bank, scalar(1), d0.u, scalar(x1));
  EXPECT_EQ(bank.states(), (MatrixXd(1, 2) << 1, 1).finished());
  EXPECT_EQ(bank.inputs(), (MatrixXd(1, 2) << 0, 0).finished());
  EXPECT_EQ(bank.successors(), (MatrixXd(1, 2) << 2, 0).finished());

  const auto d1 = control(bank, scalar(x1));
  ASSERT_EQ(d1.lambda.size(), 2);
  EXPECT_EQ(d1.lambda(0), 2.0);
  EXPECT_EQ(d1.lambda(1), 0.0);
  EXPECT_EQ(d1.u(0), -4.0);
  EXPECT_EQ(2.0 * x1 + d1.u(0), 0.0);
}

TEST(Control, DecisionInvariants) {
  ccc::Rng rng(9);
  auto bank = init_no_prior(3, 0.1);
  const auto plant = ccc::plant::random_plant(3, 17);
  VectorXd x = rng.gaussian_vector(3);
  for (int t = 0; t < 15; ++t) {
    const auto d = control(bank, x);
    EXPECT_LE((bank.states() * d.lambda - x).lpNorm<Eigen::Infinity>(),
              1e-9 * std::max(1.0, x.lpNorm<Eigen::Infinity>()));
    EXPECT_TRUE(d.u.isApprox((bank.inputs() - bank.successors()) * d.lambda) || d.u.isZero());
    EXPECT_NEAR(d.l1_value, d.lambda.lpNorm<1>(), 1e-12 * std::max(1.0, d.l1_value));
    const ccc::geometry::PointSet cols(bank.states());
    EXPECT_EQ(d.l1_value, ccc::geometry::gauge_norm(cols, x).value());
    const VectorXd next = plant.a0() * x + d.u + rng.uniform_vector(3, -1, 1);
    bank = update(bank, x, d.u, next);
    x = next;
  }
}

TEST(Control, DoesNotModifyBank) {
  const auto bank = init_no_prior(2, 0.3);
  const auto before = bank.states();
  (void)control(bank, VectorXd::Ones(2));
  EXPECT_EQ(bank.states(), before);
  EXPECT_EQ(bank.time(), 0);
  EXPECT_THROW((void)control(bank, VectorXd::Ones(3)), std::invalid_argument);
}

TEST(Update, ColumnCounts) {
  auto bank = init_with_data(2, 0.1, {{VectorXd::Ones(2), VectorXd::Zero(2), VectorXd::Ones(2)}});
  const int n0 = bank.init_columns();
  for (int k = 1; k <= 5; ++k) {
    bank = update(bank, VectorXd::Constant(2, k), VectorXd::Zero(2), VectorXd::Constant(2, k + 1));
    EXPECT_EQ(bank.states().cols(), k + n0);
    EXPECT_EQ(bank.inputs().cols(), k + n0);
    EXPECT_EQ(bank.successors().cols(), k + n0);
    EXPECT_EQ(bank.time(), k);
    EXPECT_EQ(bank.states()(0, 0), k);
    EXPECT_EQ(bank.successors()(0, 0), k + 1);
  }
  EXPECT_EQ(bank.initial().states(), init_with_data(2, 0.1, {{VectorXd::Ones(2), VectorXd::Zero(2), VectorXd::Ones(2)}}).states());
  EXPECT_THROW(bank.append(VectorXd::Zero(3), VectorXd::Zero(2), VectorXd::Zero(2)),
               std::invalid_argument);
}

TEST(Update, EmptySequenceLeavesInitialization) {
  const auto bank = init_no_prior(3, 0.2);
  EXPECT_EQ(bank.initial().states(), bank.states());
  EXPECT_EQ(bank.initial().successors(), bank.successors());
}

TEST(OpenLoop, DataMatricesMatchTrueDynamics) {
  // Xplus = A0 X + U + W with W = realized plus virtual disturbances.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto plant = ccc::plant::random_plant(3, seed);
    const auto w = ccc::plant::DisturbanceModel::uniform_box(VectorXd::Ones(3), seed).generate(3, 25);
    ccc::Rng rng(seed);
    const auto [traj, bank] =
        ccc::plant::run_closed_loop(plant, init_no_prior(3, 0.1), w, rng.gaussian_vector(3), 25);
    const auto W = ccc::analysis::build_disturbance_set(plant.a0(), bank.initial(), traj.disturbances);
    const MatrixXd resid = bank.successors() - plant.a0() * bank.states() - bank.inputs() - W.matrix();
    const double scale = std::max(1.0, bank.successors().lpNorm<Eigen::Infinity>());
    EXPECT_LE(resid.lpNorm<Eigen::Infinity>(), 1e-10 * scale) << "seed " << seed;
  }
}

TEST(Record, RoundTrip) {
  const auto plant = ccc::plant::reference_plant();
  const auto w = ccc::plant::DisturbanceModel::uniform_box(VectorXd::Ones(3), 4).generate(3, 10);
  const auto [traj, bank] =
      ccc::plant::run_closed_loop(plant, init_no_prior(3, 0.1), w, VectorXd::Ones(3), 10);
  std::stringstream ss;
  write_record(ss, bank);
  const std::string header = ss.str().substr(0, ss.str().find('\n'));
  EXPECT_EQ(header, "t,x1,x2,x3,u1,u2,u3");
  const auto back = replay_record(bank.initial(), ss);
  EXPECT_EQ(back.states(), bank.states());
  EXPECT_EQ(back.inputs(), bank.inputs());
  EXPECT_EQ(back.successors(), bank.successors());
}

TEST(Record, RejectsMissingColumns) {
  std::stringstream ss("t,x1\n0,1\n");
  EXPECT_THROW((void)replay_record(init_no_prior(1, 1.0), ss), std::invalid_argument);
}
