#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gcrelay/specfun.hpp"
#include "oracles.hpp"

namespace sf = gcrelay::specfun;

TEST(Specfun, K1MatchesIntegralOnLogGrid) {
  for (double x : oracle::log_grid(1e-3, 500.0, 50)) {
    EXPECT_LT(oracle::rel_err(sf::bessel_k1(x), oracle::bessel_k1(x)), 1e-10) << "x=" << x;
  }
}

TEST(Specfun, ZK1LimitsAndContinuity) {
  EXPECT_DOUBLE_EQ(sf::z_bessel_k1(0.0), 1.0);
  EXPECT_NEAR(sf::z_bessel_k1(1e-8), 1.0, 1e-12);
  EXPECT_EQ(sf::z_bessel_k1(800.0), 0.0);
  EXPECT_NEAR(sf::bessel_k1(2.0 - 1e-12), sf::bessel_k1(2.0 + 1e-12), 1e-10);
}

TEST(Specfun, I0ScaledMatchesIntegral) {
  for (double x : oracle::log_grid(1e-3, 700.0, 50)) {
    EXPECT_LT(oracle::rel_err(sf::bessel_i0e(x), oracle::bessel_i0e(x)), 1e-10) << "x=" << x;
    if (x < 700.0) {
      EXPECT_LT(oracle::rel_err(sf::bessel_i0(x), std::exp(x) * oracle::bessel_i0e(x)), 1e-10);
    }
  }
  EXPECT_THROW(sf::bessel_i0(800.0), std::range_error);
}

TEST(Specfun, J0MatchesIntegral) {
  for (double x : oracle::log_grid(1e-3, 200.0, 50)) {
    EXPECT_NEAR(sf::bessel_j0(x), oracle::bessel_j0(x), 1e-12) << "x=" << x;
    EXPECT_DOUBLE_EQ(sf::bessel_j0(-x), sf::bessel_j0(x));
  }
  EXPECT_NEAR(sf::bessel_j0(2.404825557695773), 0.0, 1e-14);
}

TEST(Specfun, E1MatchesIntegral) {
  for (double x : oracle::log_grid(1e-4, 600.0, 50)) {
    EXPECT_LT(oracle::rel_err(sf::gamma_upper_0(x), oracle::e1(x)), 1e-10) << "x=" << x;
    EXPECT_LT(oracle::rel_err(sf::gamma_upper_0_scaled(x), std::exp(x) * oracle::e1(x)), 1e-10);
  }
}

TEST(Specfun, EiPositiveMatchesIntegral) {
  for (double x : oracle::log_grid(1e-4, 300.0, 50)) {
    EXPECT_LT(oracle::rel_err(sf::ei(x), oracle::ei_positive(x)), 1e-10) << "x=" << x;
  }
}

TEST(Specfun, UpperGammaIsMinusEiOfNegative) {
  for (double x : oracle::log_grid(1e-4, 600.0, 50)) {
    EXPECT_LT(oracle::rel_err(sf::gamma_upper_0(x), -sf::ei(-x)), 1e-9);
  }
}

TEST(Specfun, DomainErrors) {
  EXPECT_THROW(sf::bessel_k1(0.0), std::domain_error);
  EXPECT_THROW(sf::bessel_k1(-1.0), std::domain_error);
  EXPECT_THROW(sf::bessel_i0(-1.0), std::domain_error);
  EXPECT_THROW(sf::gamma_upper_0(0.0), std::domain_error);
  EXPECT_THROW(sf::ei(0.0), std::domain_error);
  EXPECT_THROW(sf::bessel_j0(NAN), std::domain_error);
  EXPECT_THROW(sf::z_bessel_k1(-1e-3), std::domain_error);
}
