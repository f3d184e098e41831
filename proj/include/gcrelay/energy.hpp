#pragma once

#include <cstddef>
#include <stdexcept>

#include "gcrelay/fading.hpp"
#include "gcrelay/sensing.hpp"
#include "gcrelay/transmission.hpp"

namespace gcrelay {

/// Frame layout. T = T_total - T_R is split into sensing T_S and data T_D.
struct FrameTiming {
  double T_total = 0.1;
  double T_R = 1e-3;
  double T_S = 20e-3;

  double T() const { return T_total - T_R; }
  double T_D() const { return T() - T_S; }
  /// Continuous sample count T_S W.
  double samples(double W) const { return T_S * W; }
  void validate(double W) const;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double max_bits)
      : std::runtime_error(what), max_bits_(max_bits) {}
  double max_bits() const { return max_bits_; }

 private:
  double max_bits_;
};

/// Per-relay energy model with every T_S-independent quantity frozen.
///
/// The transmit power (hence E_T) and the selection probability are those of
/// the nominal sensing time the model was built with; only Delta^(T_S W)
/// varies with T_S.
struct EnergyModel {
  double E_S = 0.0;        // sensing power, W
  double E_R = 0.0;        // reporting power, W
  double E_T = 0.0;        // transmit power, W
  double E_H = 0.0;        // harvested power given detection, W
  double Pr = 1.0;         // selection probability
  double log_delta = 0.0;  // ln Delta(lambda) <= 0
  double W = 1e6;
  double T = 0.099;
  double T_R = 1e-3;
  double P_d_nominal = 0.0;  // detection probability the powers were set at

  double P_d(double T_S) const;
  double miss(double T_S) const;  // Delta^(T_S W)

  double total(double T_S) const;
  double total_nonharvesting(double T_S) const;
  double expected_data(double T_S, double rate) const;
  /// 2^(Delta^(-T_S W) D* / ((T - T_S) W Pr)) - 1 - (2^(R/W) - 1).
  double constraint(double T_S, double D_star, double rate) const;
  double constraint_slope(double T_S, double D_star, double rate) const;

  double slope(double T_S) const;      // d total / d T_S
  double curvature(double T_S) const;  // d^2 total / d T_S^2

  bool necessary_condition(double T_S) const;
  double ecg(double T_S) const;

  /// Smallest admissible sensing time, one sample.
  double T_S_min() const { return 1.0 / W; }
  void check_T_S(double T_S) const;
};

EnergyModel build_energy_model(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                               const SecondaryPolicy& policy, const CsiModel& csi,
                               const FrameTiming& nominal, bool iid = false);

double total_energy(const EnergyModel& model, double T_S);
double total_energy_nonharvesting(const EnergyModel& model, double T_S);
double expected_data(const EnergyModel& model, double T_S, double rate);
double transformed_constraint(const EnergyModel& model, double T_S, double D_star, double rate);
bool necessary_condition(const EnergyModel& model, double T_S_star);
double ecg(const EnergyModel& model, double T_S);

struct Optimum {
  double T_S_star;
  double mu;
  double E_min;
  double slope;             // objective derivative at T_S_star
  double upper;             // largest feasible sensing time
  bool constraint_active;
  bool at_lower_bound;
  bool necessary;
};

/// Minimises the frame energy over T_S in [1/W, T) subject to
/// expected_data >= D_star. Throws InfeasibleError carrying the largest
/// achievable data volume when no sensing time meets the target.
Optimum optimize_sensing_time(const EnergyModel& model, double D_star, double rate);

}  // namespace gcrelay
