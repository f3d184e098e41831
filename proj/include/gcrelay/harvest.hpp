#pragma once

#include <cstddef>
#include <vector>

#include "gcrelay/fading.hpp"
#include "gcrelay/sensing.hpp"

namespace gcrelay {

/// Average harvested power of one node.
struct HarvestEntry {
  double E_tilde;  // conditioned on detection, W
  double E_bar;    // P_d * E_tilde, W
};

struct HarvestReport {
  std::vector<HarvestEntry> relays;
};

/// eta p_p sum_l p_on gbar_{P_l,R_i}^2 and its detection-weighted average.
HarvestEntry avg_harvested_power(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                                 const SecondaryPolicy& policy, double P_d);

HarvestReport harvest_report(const LinkSet& links, const PrimaryModel& primary,
                             const SecondaryPolicy& policy, double P_d);

}  // namespace gcrelay
