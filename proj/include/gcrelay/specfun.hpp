#pragma once

// Special functions used by the closed-form link statistics.
//
// Every routine uses a convergent series for small arguments and an
// asymptotic expansion, continued fraction or backward recurrence for large
// ones. Switchover points are listed next to each function. All functions
// are pure and reentrant.

namespace gcrelay::specfun {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Bessel function of the first kind, order zero.
/// |x| < 8: power series. 8 <= |x| < 25: Miller backward recurrence.
/// |x| >= 25: Hankel asymptotic expansion.
/// Throws std::domain_error for non-finite x.
double bessel_j0(double x);

/// Modified Bessel function of the first kind, order zero, for x >= 0.
/// x < 20: power series; otherwise the large-argument expansion.
/// Throws std::domain_error for x < 0 or NaN, std::range_error on overflow
/// (x above roughly 713).
double bessel_i0(double x);

/// Exponentially scaled e^{-x} I0(x); never overflows.
double bessel_i0e(double x);

/// Modified Bessel function of the second kind, order one, for x > 0.
/// x <= 2: logarithmic series; x > 2: Steed's continued fraction.
double bessel_k1(double x);

/// z * K1(z), continuous at z = 0 where it equals 1.
double z_bessel_k1(double z);

/// Upper incomplete gamma function of order zero, Gamma(0, x) = E1(x), x > 0.
/// x <= 1: series; x > 1: Lentz continued fraction.
double gamma_upper_0(double x);

/// e^{x} E1(x) for x > 0, evaluated without overflow for large x.
double gamma_upper_0_scaled(double x);

/// Principal-value exponential integral Ei(x), x != 0.
/// x < 0: -E1(-x). 0 < x < 40: series; x >= 40: asymptotic expansion.
double ei(double x);

}  // namespace gcrelay::specfun
