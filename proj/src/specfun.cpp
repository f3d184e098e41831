#include "gcrelay/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gcrelay::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(fn) + ": non-finite argument");
  }
}

double j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < kEps * std::fabs(sum)) break;
  }
  return sum;
}

// Miller's algorithm normalised with J0 + 2 * sum_{m>=1} J_{2m} = 1.
double j0_miller(double ax) {
  int start = 2 * ((static_cast<int>(ax) + 40) / 2);
  double next = 0.0;  // J_{k+1}
  double cur = 1e-30; // J_k
  double even_sum = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / ax) * cur - next;
    next = cur;
    cur = prev;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      even_sum *= 1e-250;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += cur;
  }
  return cur / (cur + 2.0 * even_sum);
}

double j0_hankel(double ax) {
  double p = 0.0;
  double q = 0.0;
  double t = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      t *= -(odd * odd) / (8.0 * k * ax);
    }
    const double at = std::fabs(t);
    if (at > last) break;  // asymptotic series started to diverge
    last = at;
    // t_k enters P for even k and Q for odd k, with alternating sign.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * t;
    } else {
      q += sign * t;
    }
    if (at < 1e-17) break;
  }
  const double c = std::cos(ax);
  const double s = std::sin(ax);
  const double cos_chi = (c + s) * std::numbers::sqrt2 / 2.0;
  const double sin_chi = (s - c) * std::numbers::sqrt2 / 2.0;
  return std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * cos_chi - q * sin_chi);
}

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

// sum of the large-argument expansion of sqrt(2 pi x) e^{-x} I0(x)
double i0_asymptotic_sum(double x) {
  double t = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = t * odd * odd / (8.0 * k * x);
    if (next > t) break;
    t = next;
    sum += t;
    if (t < kEps * sum) break;
  }
  return sum;
}

double k1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;  // (x^2/4)^k / (k! (k+1)!)
  double harmonic = 0.0;  // H_k
  double sum_i = 1.0;
  double sum_psi = (-euler_gamma) + (1.0 - euler_gamma);
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    const double psi_k1 = -euler_gamma + harmonic;
    const double psi_k2 = psi_k1 + 1.0 / (k + 1);
    sum_i += term;
    sum_psi += (psi_k1 + psi_k2) * term;
    if (term < kEps * 1e-3) break;
  }
  const double i1 = 0.5 * x * sum_i;
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * sum_psi;
}

// Steed's CF2 (Temme) for K0 and K1; valid for x >= 2.
double k1_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  return k0 * (x + 0.5 - h) / x;
}

double e1_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) < kEps * std::fabs(sum)) break;
  }
  return -euler_gamma - std::log(x) + sum;
}

// Lentz evaluation of the E1 continued fraction; returns e^x E1(x). x > 1.
double e1_scaled_cf(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  const double ax = std::fabs(x);
  if (ax < 8.0) return j0_series(ax);
  if (ax < 25.0) return j0_miller(ax);
  return j0_hankel(ax);
}

double bessel_i0(double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("bessel_i0: x must be >= 0");
  if (x < 20.0) return i0_series(x);
  const double log_scale = x - 0.5 * std::log(2.0 * std::numbers::pi * x);
  const double value = std::exp(log_scale) * i0_asymptotic_sum(x);
  if (!std::isfinite(value)) throw std::range_error("bessel_i0: result overflows");
  return value;
}

double bessel_i0e(double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("bessel_i0e: x must be >= 0");
  if (x < 20.0) return std::exp(-x) * i0_series(x);
  return i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_k1(double x) {
  if (std::isnan(x) || x <= 0.0) throw std::domain_error("bessel_k1: x must be > 0");
  if (std::isinf(x)) return 0.0;
  if (x <= 2.0) return k1_series(x);
  return k1_continued_fraction(x);
}

double z_bessel_k1(double z) {
  if (std::isnan(z) || z < 0.0) throw std::domain_error("z_bessel_k1: z must be >= 0");
  if (z == 0.0) return 1.0;
  if (z > 740.0) return 0.0;
  return z * bessel_k1(z);
}

double gamma_upper_0(double x) {
  if (std::isnan(x) || x <= 0.0) throw std::domain_error("gamma_upper_0: x must be > 0");
  if (std::isinf(x)) return 0.0;
  if (x <= 1.0) return e1_series(x);
  return e1_scaled_cf(x) * std::exp(-x);
}

double gamma_upper_0_scaled(double x) {
  if (std::isnan(x) || x <= 0.0) {
    throw std::domain_error("gamma_upper_0_scaled: x must be > 0");
  }
  if (x <= 1.0) return std::exp(x) * e1_series(x);
  return e1_scaled_cf(x);
}

double ei(double x) {
  if (std::isnan(x) || x == 0.0) throw std::domain_error("ei: x must be nonzero");
  if (x < 0.0) return -gamma_upper_0(-x);
  if (std::isinf(x)) return x;
  if (x < 40.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 500; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < kEps * sum) break;
    }
    return euler_gamma + std::log(x) + sum;
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double prev = term;
    term *= k / x;
    if (term > prev) break;
    sum += term;
    if (term < kEps * sum) break;
  }
  const double value = std::exp(x) / x * sum;
  if (!std::isfinite(value)) throw std::range_error("ei: result overflows");
  return value;
}

}  // namespace gcrelay::specfun
