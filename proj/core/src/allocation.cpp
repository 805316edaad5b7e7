#include "mbsadapt/allocation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "mbsadapt/errors.hpp"

namespace mbsadapt {

TrafficCondition classify(const SchemeConfig& config, Bandwidth non_mbs) {
  const std::int64_t headroom = config.capacity.kbps() - non_mbs.kbps();
  return headroom >= config.max_mbs().kbps() ? TrafficCondition::kLow
                                             : TrafficCondition::kCongested;
}

std::vector<std::size_t> removal_order(std::span<const MbsSessionState> sessions) {
  std::vector<std::size_t> order(sessions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sessions[a].popularity_rank != sessions[b].popularity_rank)
      return sessions[a].popularity_rank > sessions[b].popularity_rank;
    return sessions[a].session_id > sessions[b].session_id;
  });
  return order;
}

MbsAllocationPlan plan_mbs_allocation(std::span<const MbsSessionState> sessions,
                                      Bandwidth available) {
  MbsAllocationPlan plan;
  plan.layers.reserve(sessions.size());
  std::int64_t floor = 0;
  std::int64_t total = 0;
  for (const auto& s : sessions) {
    plan.layers.push_back(s.profile.max_layers());
    floor += s.profile.min_bandwidth().kbps();
    total += s.profile.max_bandwidth().kbps();
  }
  if (available.kbps() < floor) {
    throw InfeasibleMbsFloor("MBS budget " + std::to_string(available.kbps()) +
                             " kbps is below the session floor of " +
                             std::to_string(floor) + " kbps");
  }

  const auto order = removal_order(sessions);
  bool progressed = true;
  while (total > available.kbps() && progressed) {
    progressed = false;
    for (std::size_t idx : order) {
      const auto& profile = sessions[idx].profile;
      int& n = plan.layers[idx];
      if (n <= profile.min_layers()) continue;
      total -= profile.layer(n).kbps();
      --n;
      progressed = true;
      if (total <= available.kbps()) break;
    }
  }

  plan.total = Bandwidth(total);
  if (!sessions.empty()) {
    int p = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < sessions.size(); ++i) p = std::min(p, plan.removed(sessions, i));
    plan.removed_full_rounds = p;
    for (std::size_t i = 0; i < sessions.size(); ++i)
      if (plan.removed(sessions, i) == p) ++plan.sessions_with_p_removed;
  }
  return plan;
}

}  // namespace mbsadapt
