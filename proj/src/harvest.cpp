#include "gcrelay/harvest.hpp"

#include <stdexcept>

namespace gcrelay {

HarvestEntry avg_harvested_power(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                                 const SecondaryPolicy& policy, double P_d) {
  if (!(P_d >= 0.0 && P_d <= 1.0)) throw std::domain_error("avg_harvested_power: P_d outside [0, 1]");
  primary.validate();
  policy.validate();
  auto sq = links.primary_gains_to_relay(i);
  for (double& g : sq) g *= g;
  // received power sum_l theta_l gbar_l |g_l|^2 is an activity sum with means gbar_l^2
  const ActivitySum received(sq, primary.p_on);
  const double E_tilde = policy.eta * primary.p_p * received.mean();
  return {E_tilde, P_d * E_tilde};
}

HarvestReport harvest_report(const LinkSet& links, const PrimaryModel& primary,
                             const SecondaryPolicy& policy, double P_d) {
  HarvestReport out;
  for (std::size_t i = 0; i < links.relays(); ++i) {
    out.relays.push_back(avg_harvested_power(i, links, primary, policy, P_d));
  }
  return out;
}

}  // namespace gcrelay
