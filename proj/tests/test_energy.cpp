#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gcrelay/energy.hpp"
#include "gcrelay/mcsim.hpp"
#include "gcrelay/scenario.hpp"
#include "oracles.hpp"

using namespace gcrelay;

namespace {

EnergyModel model_of(const Scenario& s, std::size_t M, std::size_t L) {
  const SystemConfig sys = s.system(M, L);
  return build_energy_model(s.relay, sys.links, sys.primary, sys.policy, sys.csi, s.timing, sys.iid);
}

}  // namespace

TEST(Energy, SlopeAndCurvatureMatchFiniteDifferences) {
  const EnergyModel m = model_of(default_scenario("fig7"), 4, 2);
  for (double t : oracle::log_grid(2e-6, 0.09, 30)) {
    const double h = 1e-4 * t;
    const double fd = (m.total(t + h) - m.total(t - h)) / (2 * h);
    EXPECT_NEAR(m.slope(t), fd, 1e-6 * std::max(1.0, std::fabs(fd))) << t;
    const double fd2 = (m.slope(t + h) - m.slope(t - h)) / (2 * h);
    EXPECT_NEAR(m.curvature(t), fd2, 1e-5 * std::max(1.0, std::fabs(fd2))) << t;
    EXPECT_GE(m.curvature(t), 0.0);
  }
}

TEST(Energy, HarvestingSplit) {
  const EnergyModel m = model_of(default_scenario("fig7"), 4, 2);
  for (double t : {1e-5, 1e-3, 0.02, 0.08}) {
    EXPECT_NEAR(m.total_nonharvesting(t) - m.total(t), m.E_H * m.P_d(t) * (m.T - t), 1e-12);
  }
}

TEST(Energy, SignFlipOfFrameEnergy) {
  const Scenario s = default_scenario("fig7");
  const EnergyModel m = model_of(s, s.M, s.L);
  EXPECT_LT(m.total(0.02), 0.0);
  for (double t : s.sweep.points()) EXPECT_GT(m.total_nonharvesting(t), 0.0);
}

TEST(Energy, OptimizerUnconstrainedFindsGridMinimum) {
  const Scenario s = default_scenario("table1");
  for (std::size_t M : {1u, 3u}) {
    for (std::size_t L : {1u, 4u}) {
      const EnergyModel m = model_of(s, M, L);
      const Optimum o = optimize_sensing_time(m, 0.0, s.rate);
      EXPECT_FALSE(o.constraint_active);
      EXPECT_EQ(o.mu, 0.0);
      EXPECT_TRUE(o.necessary);
      for (double t : oracle::log_grid(m.T_S_min(), 0.098, 400)) EXPECT_LE(o.E_min, m.total(t) + 1e-15);
      if (o.at_lower_bound) {
        EXPECT_GE(o.slope, 0.0);
      } else {
        EXPECT_NEAR(o.slope, 0.0, 1e-6);
      }
    }
  }
}

TEST(Energy, ActiveConstraintKkt) {
  const Scenario s = default_scenario("fig7");
  const EnergyModel m = model_of(s, s.M, s.L);
  const Optimum free = optimize_sensing_time(m, 0.0, s.rate);
  // demand more than the unconstrained optimum delivers but less than the best case
  const double D = 0.5 * (m.expected_data(free.T_S_star, s.rate) + m.expected_data(m.T_S_min(), s.rate));
  const Optimum o = optimize_sensing_time(m, D, s.rate);
  EXPECT_TRUE(o.constraint_active);
  EXPECT_GT(o.mu, 0.0);
  EXPECT_LE(o.T_S_star, free.T_S_star + 1e-12);
  EXPECT_LE(std::fabs(o.mu * m.constraint(o.T_S_star, D, s.rate)), 1e-6);
  EXPECT_GE(m.expected_data(o.T_S_star, s.rate), D * (1 - 1e-9));
  // stationarity of the Lagrangian
  EXPECT_NEAR(o.slope + o.mu * m.constraint_slope(o.T_S_star, D, s.rate), 0.0, 1e-9 * std::fabs(o.slope) + 1e-12);
}

TEST(Energy, InfeasibleTargetReportsMaximum) {
  const Scenario s = default_scenario("table1");
  const EnergyModel m = model_of(s, 1, 1);
  const double best = m.expected_data(m.T_S_min(), s.rate);
  try {
    optimize_sensing_time(m, 2.0 * best, s.rate);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NEAR(e.max_bits(), best, 1e-9 * best);
  }
  EXPECT_THROW(optimize_sensing_time(m, -1.0, s.rate), std::domain_error);
}

TEST(Energy, EcgInfiniteWithoutHarvest) {
  EnergyModel m = model_of(default_scenario("fig8"), 1, 1);
  EXPECT_TRUE(std::isfinite(m.ecg(0.02)));
  m.E_H = 0.0;
  EXPECT_EQ(m.ecg(0.02), std::numeric_limits<double>::infinity());
}

TEST(Energy, DomainChecks) {
  const EnergyModel m = model_of(default_scenario("fig7"), 4, 1);
  EXPECT_THROW(m.total(0.0), std::domain_error);
  EXPECT_THROW(m.constraint(m.T, 1.0, 1e5), std::domain_error);
  EXPECT_EQ(m.expected_data(m.T, 1e5), 0.0);
  FrameTiming bad{0.1, 1e-3, 0.2};
  EXPECT_THROW(bad.validate(1e6), std::invalid_argument);
  FrameTiming tiny{0.1, 1e-3, 1e-7};
  EXPECT_THROW(tiny.validate(1e6), std::invalid_argument);
}

TEST(Energy, FrameEnergyMatchesSimulation) {
  Scenario s = default_scenario("fig7");
  s.d_PS = s.d_PR = s.d_PD = 1.5;
  const SystemConfig sys = s.system();
  const EnergyModel m = model_of(s, s.M, s.L);
  MCOptions o;
  o.trials = 200000;
  o.seed = 21;
  for (double t : {1e-6, 3e-6}) {
    for (bool harvesting : {true, false}) {
      const double want = harvesting ? m.total(t) : m.total_nonharvesting(t);
      const MCEstimate e = mc_frame_energy(sys, 0, m, t, harvesting, o);
      EXPECT_LT(std::fabs(e.z_score(want)), 4.0) << t << " " << harvesting << ": " << want << " vs " << e.mean;
    }
  }
  const MCEstimate g = mc_ecg(sys, 0, m, 3e-6, o);
  EXPECT_LT(std::fabs(g.z_score(m.ecg(3e-6))), 4.0);
}
