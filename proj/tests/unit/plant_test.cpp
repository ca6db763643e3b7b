#include <gtest/gtest.h>

#include "ccc/controller.hpp"
#include "ccc/plant.hpp"
#include "ccc/random.hpp"

using namespace ccc::plant;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

VectorXd scalar(double v) { return VectorXd::Constant(1, v); }

}  // namespace

TEST(LinearPlant, Validates) {
  EXPECT_THROW(LinearPlant(MatrixXd::Ones(2, 3)), std::invalid_argument);
  EXPECT_THROW(LinearPlant(MatrixXd(0, 0)), std::invalid_argument);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(LinearPlant{bad}, std::invalid_argument);
  EXPECT_EQ(LinearPlant(MatrixXd::Identity(4, 4)).dim(), 4);
}

TEST(Lump, Examples) {
  const MatrixXd a0 = MatrixXd::Constant(1, 1, 2.0);
  const auto zero = lump({scalar(0), scalar(0)}, {scalar(0), scalar(0), scalar(0)}, a0);
  for (const auto& w : zero) EXPECT_EQ(w(0), 0.0);
  const auto constant = lump({scalar(3), scalar(3)}, {scalar(0), scalar(0), scalar(0)}, a0);
  for (const auto& w : constant) EXPECT_EQ(w(0), 3.0);
  const auto w = lump({scalar(0)}, {scalar(1), scalar(0)}, a0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0](0), -2.0);
  EXPECT_THROW((void)lump({scalar(0)}, {scalar(0)}, a0), std::invalid_argument);
}

TEST(Step, Examples) {
  const auto plant = reference_plant();
  const Vector3d x(0.3, -1, 2);
  EXPECT_LT(step(plant, x, -plant.a0() * x, Vector3d::Zero()).norm(), 1e-15);
  const Vector3d w(1, 2, 3);
  EXPECT_EQ(step(plant, Vector3d::Zero(), Vector3d::Zero(), w), VectorXd(w));
  const VectorXd e1 = step(plant, Vector3d(1, 0, 0), Vector3d::Zero(), Vector3d::Zero());
  EXPECT_EQ(e1, VectorXd(Vector3d(1.4, 0.2, 0.5)));
  EXPECT_THROW((void)step(plant, VectorXd::Zero(2), Vector3d::Zero(), Vector3d::Zero()),
               std::invalid_argument);
}

TEST(ReferencePlant, Eigenvalues) {
  Eigen::EigenSolver<MatrixXd> es(reference_plant().a0());
  std::vector<double> ev;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).imag(), 0.0, 1e-12);
    ev.push_back(es.eigenvalues()(i).real());
  }
  std::sort(ev.begin(), ev.end());
  EXPECT_NEAR(ev[0], 0.86, 0.01);
  EXPECT_NEAR(ev[1], 1.13, 0.01);
  EXPECT_NEAR(ev[2], 2.71, 0.01);
}

TEST(Disturbance, Models) {
  for (const auto& w : DisturbanceModel::zero().generate(3, 5)) EXPECT_TRUE(w.isZero());
  const auto box = DisturbanceModel::uniform_box(Vector3d(1, 2, 0.5), 7).generate(3, 2000);
  ASSERT_EQ(box.size(), 2000u);
  for (const auto& w : box) {
    EXPECT_LE(std::abs(w(0)), 1.0);
    EXPECT_LE(std::abs(w(1)), 2.0);
    EXPECT_LE(std::abs(w(2)), 0.5);
  }
  EXPECT_EQ(box, DisturbanceModel::uniform_box(Vector3d(1, 2, 0.5), 7).generate(3, 2000));
  const auto seq = DisturbanceModel::explicit_sequence({scalar(1), scalar(2)});
  EXPECT_EQ(seq.generate(1, 2)[1](0), 2.0);
  EXPECT_THROW((void)seq.generate(1, 3), std::invalid_argument);
  EXPECT_THROW((void)DisturbanceModel::uniform_box(Vector3d(1, 0, 1), 1), std::invalid_argument);
}

TEST(ClosedLoop, OriginIsInvariant) {
  const auto [traj, bank] = run_closed_loop(random_plant(3, 1), ccc::controller::init_no_prior(3),
                                            DisturbanceModel::zero().generate(3, 10),
                                            VectorXd::Zero(3), 10);
  EXPECT_EQ(traj.horizon(), 10);
  EXPECT_EQ(traj.states.size(), 11u);
  for (const auto& x : traj.states) EXPECT_TRUE(x.isZero());
  for (const auto& u : traj.inputs) EXPECT_TRUE(u.isZero());
  EXPECT_EQ(bank.time(), 10);
}

TEST(ClosedLoop, ScalarWalkthrough) {
  const LinearPlant plant(MatrixXd::Constant(1, 1, 2.0));
  const auto [traj, bank] = run_closed_loop(plant, ccc::controller::init_no_prior(1, 1.0),
                                            DisturbanceModel::zero().generate(1, 5), scalar(1), 5);
  const std::vector<double> expected = {1, 2, 0, 0, 0, 0};
  for (std::size_t t = 0; t < expected.size(); ++t) EXPECT_EQ(traj.states[t](0), expected[t]);
  EXPECT_EQ(traj.inputs[1](0), -4.0);
}

TEST(ClosedLoop, EveryStepFollowsPlant) {
  const auto plant = random_plant(3, 31);
  const auto w = DisturbanceModel::uniform_box(VectorXd::Ones(3), 31).generate(3, 40);
  const auto [traj, bank] =
      run_closed_loop(plant, ccc::controller::init_no_prior(3), w, VectorXd::Ones(3), 40);
  ASSERT_EQ(traj.lambdas.size(), 40u);
  for (int t = 0; t < 40; ++t) {
    const VectorXd r = traj.states[t + 1] - (plant.a0() * traj.states[t] + traj.inputs[t] + w[t]);
    EXPECT_LE(r.lpNorm<Eigen::Infinity>(), 1e-10 * std::max(1.0, traj.states[t + 1].norm()));
  }
}

TEST(ClosedLoop, NoiseLumpingEquivalence) {
  // Plant with process disturbance d and measurement noise: the controller
  // sees y = x + noise. Lumping gives the same measured sequence.
  const auto plant = reference_plant();
  const int T = 30;
  ccc::Rng rng(77);
  std::vector<VectorXd> d, noise;
  for (int t = 0; t < T; ++t) d.push_back(rng.uniform_vector(3, -1, 1));
  for (int t = 0; t <= T; ++t) noise.push_back(rng.uniform_vector(3, -0.1, 0.1));
  const VectorXd x0 = Vector3d(0.2, 0, 0.1);

  auto bank = ccc::controller::init_no_prior(3);
  VectorXd x = x0;
  std::vector<VectorXd> measured = {x0 + noise[0]};
  for (int t = 0; t < T; ++t) {
    const VectorXd y = x + noise[t];
    const auto dec = ccc::controller::control(bank, y);
    x = plant.a0() * x + dec.u + d[t];
    const VectorXd y_next = x + noise[t + 1];
    bank.append(y, dec.u, y_next);
    measured.push_back(y_next);
  }

  const auto w = lump(d, noise, plant.a0());
  const auto [traj, lumped_bank] =
      run_closed_loop(plant, ccc::controller::init_no_prior(3), w, x0 + noise[0], T);
  for (int t = 0; t <= T; ++t) {
    EXPECT_LE((traj.states[t] - measured[t]).lpNorm<Eigen::Infinity>(),
              1e-10 * std::max(1.0, measured[t].lpNorm<Eigen::Infinity>()))
        << "t = " << t;
  }
}

TEST(ClosedLoop, Reproducible) {
  auto run = [] {
    const auto w = DisturbanceModel::uniform_box(VectorXd::Ones(3), 5).generate(3, 30);
    return run_closed_loop(random_plant(3, 5), ccc::controller::init_no_prior(3), w,
                           VectorXd::Ones(3), 30)
        .first;
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.inputs, b.inputs);
  EXPECT_EQ(a.lambdas, b.lambdas);
}

TEST(ClosedLoop, RejectsBadArguments) {
  const auto plant = random_plant(2, 1);
  const auto w = DisturbanceModel::zero().generate(2, 3);
  EXPECT_THROW((void)run_closed_loop(plant, ccc::controller::init_no_prior(2), w, VectorXd::Ones(2), 0),
               std::invalid_argument);
  EXPECT_THROW((void)run_closed_loop(plant, ccc::controller::init_no_prior(2), w, VectorXd::Ones(2), 4),
               std::invalid_argument);
  EXPECT_THROW((void)run_closed_loop(plant, ccc::controller::init_no_prior(3), w, VectorXd::Ones(2), 3),
               std::invalid_argument);
}

TEST(RandomPlant, SeededAndStandardGaussian) {
  EXPECT_EQ(random_plant(3, 42).a0(), random_plant(3, 42).a0());
  EXPECT_NE(random_plant(3, 42).a0(), random_plant(3, 43).a0());
  const auto big = random_plant(100, 9).a0();
  const double mean = big.mean();
  const double var = (big.array() - mean).square().sum() / (big.size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_GE(var, 0.9);
  EXPECT_LE(var, 1.1);
}
