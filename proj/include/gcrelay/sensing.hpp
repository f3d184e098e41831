#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gcrelay/fading.hpp"

namespace gcrelay {

/// Secondary-network power and detection parameters.
///
/// `lambda` is the detection threshold in the normalised SNR domain, i.e. the
/// threshold power divided by N0. Every power is in watts; P_max and Q may
/// be +infinity to disable the respective cap.
struct SecondaryPolicy {
  std::size_t M = 1;
  double P_max = 1.0;
  double Q = 1.0;
  double N0 = 1.0;
  double W = 1e6;       // Hz
  double lambda = 1.0;  // threshold / N0
  double eta = 0.35;
  double P_Tx = 0.01;
  double P_Rx = 0.01;

  void validate() const;
};

/// Interference-limited power: (1/P_max + E[q] * activity / Q)^{-1}.
/// `activity` is 1 for reporting and (1 - P_d) for transmission.
double interference_limited_power(double P_max, double Q, double mean_max_gain,
                                  double activity = 1.0);

/// Reporting-phase output power of relay i.
double report_power(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                    const SecondaryPolicy& policy);

/// First-hop SNR at relay i during sensing, (p_p/N0) sum_l theta_l |g_{P_l,R_i}|^2.
ActivitySum relay_sensing_snr(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                              const SecondaryPolicy& policy);

/// Sensing SNR at the destination.
ActivitySum destination_sensing_snr(const LinkSet& links, const PrimaryModel& primary,
                                    const SecondaryPolicy& policy);

/// Fixed-gain constant U = (E[1/(gamma_1 + 1)])^{-1} of relay i.
double fixed_gain_report(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                         const SecondaryPolicy& policy);

/// Per-relay quantities of the reporting phase.
struct RelayReport {
  ActivitySum first_hop;
  double power;       // W
  double hop2_mean;   // mean of the relay -> destination SNR
  double U;           // fixed-gain constant
};

/// Everything the detection statistics need, computed once.
class ReportingPhase {
 public:
  ReportingPhase(const LinkSet& links, const PrimaryModel& primary, const SecondaryPolicy& policy);

  std::size_t relays() const { return relays_.size(); }
  const RelayReport& relay(std::size_t i) const { return relays_.at(i); }
  const ActivitySum& direct() const { return direct_; }

  /// CDF of the dual-hop sensing SNR gamma_1 gamma_2 / (gamma_2 + U) via relay i.
  double e2e_cdf(std::size_t i, double x) const;
  double e2e_survival(std::size_t i, double x) const;

  /// ln Delta(lambda): log of the per-sample probability that all M + 1
  /// observations stay below the threshold.
  double log_miss(double lambda) const;

 private:
  std::vector<RelayReport> relays_;
  ActivitySum direct_;
};

/// CDF of the reporting-phase end-to-end SNR through relay i. x >= 0.
double report_e2e_cdf(double x, std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                      const SecondaryPolicy& policy);

/// Delta(lambda) = prod_i F_i(lambda) * F_PD(lambda).
double miss_probability(double lambda, const LinkSet& links, const PrimaryModel& primary,
                        const SecondaryPolicy& policy);

/// P_d = 1 - Delta(lambda)^U. U may be fractional (U = T_S W).
double detection_probability(double lambda, double U, const LinkSet& links,
                             const PrimaryModel& primary, const SecondaryPolicy& policy);

/// Same, from a precomputed ln Delta.
double detection_probability_from_log_miss(double log_miss, double U);

class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clipping level of a saturation-avoiding fixed-gain amplifier.
struct SaturationGain {
  double K;                 // clipping level, W
  double threshold;         // SNR above which the amplifier clips, K U / N0 - 1
  double residual;          // clipped average output power minus 1
  double avg_modified_gain; // average of the piecewise modified gain at K
};

/// Average of the piecewise modified gain: 1/U while gamma_1 <= T and
/// 1/(gamma_1 + 1) above, T = K U / N0 - 1. Closed form through Ei.
double average_modified_gain(double K, const ActivitySum& first_hop, double U, double N0);

/// Average normalised amplifier output E[min((gamma_1 + 1)/U, K/N0)].
double average_clipped_output(double K, const ActivitySum& first_hop, double U, double N0);

/// Solves average_clipped_output(K) = 1 by a geometric scan of K/N0 over
/// [1e-6, 1e6] followed by bisection. Throws NoRootError without a sign change.
SaturationGain solve_clipping_level(const ActivitySum& first_hop, double U, double N0);

/// Clipping level for relay i in the reporting phase.
SaturationGain solve_saturation_gain(std::size_t i, const LinkSet& links,
                                     const PrimaryModel& primary, const SecondaryPolicy& policy);

}  // namespace gcrelay
