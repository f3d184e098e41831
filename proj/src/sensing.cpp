#include "gcrelay/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcrelay/specfun.hpp"

namespace gcrelay {

void SecondaryPolicy::validate() const {
  if (M == 0) throw std::invalid_argument("SecondaryPolicy: M must be >= 1");
  if (!(P_max > 0.0) || !(Q > 0.0) || !(N0 > 0.0) || !(W > 0.0)) {
    throw std::invalid_argument("SecondaryPolicy: P_max, Q, N0 and W must be > 0");
  }
  if (!(P_Tx > 0.0) || !(P_Rx > 0.0)) {
    throw std::invalid_argument("SecondaryPolicy: circuit powers must be > 0");
  }
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("SecondaryPolicy: eta must lie in (0, 1]");
  if (!(lambda >= 0.0)) throw std::invalid_argument("SecondaryPolicy: lambda must be >= 0");
}

double interference_limited_power(double P_max, double Q, double mean_max_gain, double activity) {
  const double inv = 1.0 / P_max + activity * mean_max_gain / Q;
  return 1.0 / inv;
}

double report_power(std::size_t i, const LinkSet& links, const PrimaryModel& /*primary*/,
                    const SecondaryPolicy& policy) {
  const auto gains = links.primary_gains_to_relay(i);
  return interference_limited_power(policy.P_max, policy.Q, max_exp_expectation(gains));
}

ActivitySum relay_sensing_snr(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                              const SecondaryPolicy& policy) {
  auto means = links.primary_gains_to_relay(i);
  for (double& m : means) m *= primary.p_p / policy.N0;
  return ActivitySum(means, primary.p_on);
}

ActivitySum destination_sensing_snr(const LinkSet& links, const PrimaryModel& primary,
                                    const SecondaryPolicy& policy) {
  auto means = links.primary_gains_to_destination();
  for (double& m : means) m *= primary.p_p / policy.N0;
  return ActivitySum(means, primary.p_on);
}

double fixed_gain_report(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                         const SecondaryPolicy& policy) {
  return 1.0 / relay_sensing_snr(i, links, primary, policy).expect_inv_one_plus();
}

ReportingPhase::ReportingPhase(const LinkSet& links, const PrimaryModel& primary,
                               const SecondaryPolicy& policy)
    : direct_(destination_sensing_snr(links, primary, policy)) {
  links.validate();
  primary.validate();
  policy.validate();
  if (links.relays() != policy.M || links.primaries() != primary.L) {
    throw std::invalid_argument("ReportingPhase: M or L disagree with the link set");
  }
  relays_.reserve(links.relays());
  for (std::size_t i = 0; i < links.relays(); ++i) {
    ActivitySum hop1 = relay_sensing_snr(i, links, primary, policy);
    const double power = report_power(i, links, primary, policy);
    const double hop2 = power * links.gbar_RD(i) / policy.N0;
    const double U = 1.0 / hop1.expect_inv_one_plus();
    relays_.push_back(RelayReport{std::move(hop1), power, hop2, U});
  }
}

// S(x) = sum_k c_k exp(-x/m_k) z_k K1(z_k),  z_k = 2 sqrt(U x / (m_k b)).
// The r = 0 atom of the first hop sits in 1 - sum_k c_k.
double ReportingPhase::e2e_survival(std::size_t i, double x) const {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("report_e2e_cdf: x must be >= 0");
  const RelayReport& r = relays_.at(i);
  double survival = 0.0;
  for (const auto& t : r.first_hop.terms()) {
    const double z = 2.0 * std::sqrt(r.U * x / (t.mean * r.hop2_mean));
    survival += t.coef * std::exp(-x / t.mean) * specfun::z_bessel_k1(z);
  }
  return std::clamp(survival, 0.0, 1.0);
}

double ReportingPhase::e2e_cdf(std::size_t i, double x) const { return 1.0 - e2e_survival(i, x); }

double ReportingPhase::log_miss(double lambda) const {
  if (!(lambda >= 0.0)) throw std::domain_error("log_miss: lambda must be >= 0");
  double acc = std::log1p(-std::clamp(direct_.survival(lambda), 0.0, 1.0));
  for (std::size_t i = 0; i < relays_.size(); ++i) acc += std::log1p(-e2e_survival(i, lambda));
  return std::min(acc, 0.0);
}

double report_e2e_cdf(double x, std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                      const SecondaryPolicy& policy) {
  return ReportingPhase(links, primary, policy).e2e_cdf(i, x);
}

double miss_probability(double lambda, const LinkSet& links, const PrimaryModel& primary,
                        const SecondaryPolicy& policy) {
  return std::exp(ReportingPhase(links, primary, policy).log_miss(lambda));
}

double detection_probability_from_log_miss(double log_miss, double U) {
  if (!(U >= 0.0)) throw std::domain_error("detection_probability: U must be >= 0");
  const double pd = -std::expm1(U * log_miss);
  return pd > 0.0 ? pd : 0.0;
}

double detection_probability(double lambda, double U, const LinkSet& links,
                             const PrimaryModel& primary, const SecondaryPolicy& policy) {
  if (!(lambda >= 0.0)) throw std::domain_error("detection_probability: lambda must be >= 0");
  return detection_probability_from_log_miss(
      ReportingPhase(links, primary, policy).log_miss(lambda), U);
}

double average_modified_gain(double K, const ActivitySum& first_hop, double U, double N0) {
  const double T = K * U / N0 - 1.0;
  if (T < 0.0) {
    // every outcome, the zero-SNR atom included, sits in the 1/(gamma+1) branch
    return first_hop.atom() + first_hop.tail_inv_one_plus(0.0);
  }
  return first_hop.cdf(T) / U + first_hop.tail_inv_one_plus(T);
}

double average_clipped_output(double K, const ActivitySum& first_hop, double U, double N0) {
  const double kappa = K / N0;
  const double T = kappa * U - 1.0;
  if (T < 0.0) return kappa;
  return first_hop.head_one_plus(T) / U + kappa * first_hop.survival(T);
}

SaturationGain solve_clipping_level(const ActivitySum& first_hop, double U, double N0) {
  auto residual = [&](double kappa) {
    return average_clipped_output(kappa * N0, first_hop, U, N0) - 1.0;
  };
  constexpr double lo_end = 1e-6;
  constexpr double hi_end = 1e6;
  constexpr int steps = 240;
  const double ratio = std::pow(hi_end / lo_end, 1.0 / steps);

  double lo = lo_end;
  double f_lo = residual(lo);
  double hi = 0.0;
  bool bracketed = false;
  for (int s = 1; s <= steps; ++s) {
    const double k = lo_end * std::pow(ratio, s);
    const double f = residual(k);
    if ((f_lo < 0.0) != (f < 0.0) || f == 0.0) {
      hi = k;
      bracketed = true;
      break;
    }
    lo = k;
    f_lo = f;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "solve_clipping_level: no sign change for K/N0 in [" << lo_end << ", " << hi_end
        << "]";
    throw NoRootError(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = residual(mid);
    if ((f_lo < 0.0) == (f < 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  const double kappa = 0.5 * (lo + hi);
  SaturationGain out{};
  out.K = kappa * N0;
  out.threshold = kappa * U - 1.0;
  out.residual = residual(kappa);
  out.avg_modified_gain = average_modified_gain(out.K, first_hop, U, N0);
  return out;
}

SaturationGain solve_saturation_gain(std::size_t i, const LinkSet& links,
                                     const PrimaryModel& primary, const SecondaryPolicy& policy) {
  const ActivitySum hop1 = relay_sensing_snr(i, links, primary, policy);
  const double U = 1.0 / hop1.expect_inv_one_plus();
  return solve_clipping_level(hop1, U, policy.N0);
}

}  // namespace gcrelay
