#pragma once

// Traffic-condition test and fair MBS layer degradation.

#include <cstddef>
#include <span>
#include <vector>

#include "mbsadapt/model.hpp"

namespace mbsadapt {

enum class TrafficCondition { kLow, kCongested };

// Low iff capacity - non_mbs >= sum of session maxima.
TrafficCondition classify(const SchemeConfig& config, Bandwidth non_mbs);

struct MbsAllocationPlan {
  std::vector<int> layers;       // aligned with the input sessions
  int removed_full_rounds = 0;   // P: fewest enhanced layers removed from any session
  int sessions_with_p_removed = 0;  // M1: sessions that lost exactly P layers
  Bandwidth total;

  int removed(std::span<const MbsSessionState> sessions, std::size_t i) const {
    return sessions[i].profile.max_layers() - layers[i];
  }
};

// Session indices in layer-removal order: least popular first (largest
// rank), ties broken by larger session id.
std::vector<std::size_t> removal_order(std::span<const MbsSessionState> sessions);

// Starts every session at max_layers and removes one top layer at a time in
// rounds over removal_order(), skipping sessions already at min_layers, until
// the total fits `available`. Only the session profiles are read; the current
// active_layers are ignored. Throws InfeasibleMbsFloor if `available` is below
// the sum of session minima.
MbsAllocationPlan plan_mbs_allocation(std::span<const MbsSessionState> sessions,
                                      Bandwidth available);

}  // namespace mbsadapt
