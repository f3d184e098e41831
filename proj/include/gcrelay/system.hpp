#pragma once

#include "gcrelay/fading.hpp"
#include "gcrelay/sensing.hpp"
#include "gcrelay/transmission.hpp"

namespace gcrelay {

/// Complete physical configuration shared by the analytics and the simulator.
struct SystemConfig {
  LinkSet links;
  PrimaryModel primary;
  SecondaryPolicy policy;
  CsiModel csi;
  bool iid = false;

  void validate() const {
    links.validate();
    primary.validate();
    policy.validate();
    csi.validate();
    if (links.relays() != policy.M) throw std::invalid_argument("SystemConfig: M disagrees with links");
    if (links.primaries() != primary.L) throw std::invalid_argument("SystemConfig: L disagrees with links");
  }
};

}  // namespace gcrelay
