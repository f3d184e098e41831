#pragma once

#include <cstddef>
#include <vector>

#include "gcrelay/fading.hpp"
#include "gcrelay/sensing.hpp"

namespace gcrelay {

/// Correlation between the channel estimate used for selection and the
/// channel actually seen during transmission.
struct CsiModel {
  double rho = 1.0;

  /// rho = |J0(2 pi f_D T_diff)|.
  static CsiModel from_doppler(double f_doppler, double T_diff);
  void validate() const;
};

double rho_from_doppler(double f_doppler, double T_diff);

/// Interference-limited transmit powers with the primary active w.p. 1 - P_d.
struct TransmissionPowers {
  double p_SR;               // source, W
  std::vector<double> p_RD;  // relay l, W
};

TransmissionPowers trans_powers(const LinkSet& links, const PrimaryModel& primary,
                                const SecondaryPolicy& policy, double P_d);

/// One term of the selected-relay second-hop density. The density of the
/// actual relay -> destination SNR, jointly with the event that relay l wins
/// the selection on outdated estimates, is sum_S Xi_S exp(-Z_S y).
struct SubsetTerm {
  double Xi;
  double Z;
};

/// Per-relay coefficients of the transmission phase.
struct TransCoeffs {
  double a;        // mean first-hop SNR p_SR gbar_SR / N0
  double b;        // mean second-hop SNR p_RD gbar_RD / N0
  double U;        // fixed-gain constant
  double select_prob;
  std::vector<SubsetTerm> terms;
};

class TransmissionPhase {
 public:
  /// With `iid` set the links must be identically distributed across relays
  /// and the coefficients follow the binomial collapse of the subset sums.
  TransmissionPhase(const LinkSet& links, const PrimaryModel& primary,
                    const SecondaryPolicy& policy, const CsiModel& csi, double P_d,
                    bool iid = false);

  std::size_t relays() const { return coeffs_.size(); }
  const TransCoeffs& coeffs(std::size_t l) const { return coeffs_.at(l); }
  const TransmissionPowers& powers() const { return powers_; }
  bool iid() const { return iid_; }

  /// Pr[relay l selected].
  double selection_prob(std::size_t l) const { return coeffs_.at(l).select_prob; }

  /// CDF of the e2e SNR through relay l given that l is selected.
  double e2e_cdf(std::size_t l, double x) const;

  /// Pr[relay l selected and e2e SNR <= x].
  double joint_cdf(std::size_t l, double x) const;

  /// Outage probability at threshold gamma_th.
  double outage(double gamma_th) const;

 private:
  std::vector<TransCoeffs> coeffs_;
  TransmissionPowers powers_;
  bool iid_;
};

/// Fixed-gain constant for an exponential first hop of mean `a`.
double trans_fixed_gain(double a);

double trans_e2e_cdf(double x, std::size_t l, const LinkSet& links, const PrimaryModel& primary,
                     const SecondaryPolicy& policy, const CsiModel& csi, double P_d,
                     bool iid = false);

double relay_selection_prob(std::size_t l, const LinkSet& links, const PrimaryModel& primary,
                            const SecondaryPolicy& policy, double P_d);

double outage_probability(double gamma_th, const LinkSet& links, const PrimaryModel& primary,
                          const SecondaryPolicy& policy, const CsiModel& csi, double P_d,
                          bool iid = false);

/// Clipping level of the transmission-phase amplifier at relay l.
SaturationGain solve_transmission_saturation_gain(const TransmissionPhase& phase, std::size_t l,
                                                  double N0);

}  // namespace gcrelay
