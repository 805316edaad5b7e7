#include "mbsadapt/admission.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "mbsadapt/allocation.hpp"
#include "mbsadapt/errors.hpp"

namespace mbsadapt {
namespace {

struct UnicastCut {
  CallId id;
  int layers;
  int original_layers;
};

// Re-plans the sessions for `budget` and records every changed session.
// Reductions are listed least popular first, restorations most popular first.
void apply_mbs_plan(CellState& state, Bandwidth budget, std::vector<Mutation>& mutations) {
  const auto plan = plan_mbs_allocation(state.sessions(), budget);
  auto order = removal_order(state.sessions());
  if (plan.total > state.mbs_total()) std::reverse(order.begin(), order.end());
  for (std::size_t i : order) {
    const MbsSessionState& s = state.sessions()[i];
    if (s.active_layers == plan.layers[i]) continue;
    const Bandwidth before = s.bandwidth();
    state.set_session_layers(i, plan.layers[i]);
    mutations.push_back({Mutation::Target::kMbsSession, static_cast<std::uint64_t>(s.session_id),
                         before, state.sessions()[i].bandwidth()});
  }
}

void set_call(CellState& state, CallId id, Bandwidth allocated, int layers,
              std::vector<Mutation>& mutations) {
  const Bandwidth before = state.call(id).allocated;
  state.set_call_allocation(id, allocated, layers);
  mutations.push_back({Mutation::Target::kCall, id, before, allocated});
}

CallId insert_admitted(CellState& state, const Request& request, Bandwidth target,
                       const CallTiming& timing) {
  const SchemeConfig& config = state.config();
  CallState call;
  call.traffic_class = request.traffic_class;
  call.origin = request.origin;
  call.allocated = target;
  call.min_kbps = request.req_min;
  call.max_kbps = request.req_max;
  if (request.traffic_class.kind == ServiceKind::kUnicastVideo) {
    const LayerProfile& profile = config.unicast;
    call.active_layers = profile.min_layers();
    while (profile.bandwidth(call.active_layers) < target) ++call.active_layers;
  }
  call.admit_time = state.clock();
  call.residual_duration = timing.duration_s;
  call.dwell_deadline = state.clock() + timing.dwell_s;
  return state.insert_call(std::move(call));
}

AdmissionDecision rejected(const Request& request) {
  AdmissionDecision d;
  d.outcome = request.origin == CallOrigin::kNew ? Outcome::kBlocked : Outcome::kDropped;
  return d;
}

AdmissionDecision admitted(CellState& state, const Request& request, Bandwidth target,
                           const CallTiming& timing, std::vector<Mutation> mutations) {
  AdmissionDecision d;
  d.outcome = Outcome::kAdmitted;
  d.initial_allocation = target;
  d.mutations = std::move(mutations);
  d.call_id = insert_admitted(state, request, target, timing);
  return d;
}

}  // namespace

AdmissionDecision admit(CellState& state, const Request& request, const CallTiming& timing) {
  const SchemeConfig& config = state.config();
  const bool is_handover = request.origin == CallOrigin::kHandover;

  if (!config.scheme.adaptive()) {
    // Fixed reserve: no reclaiming and no handover priority.
    if (state.free() >= request.req_max)
      return admitted(state, request, request.req_max, timing, {});
    return rejected(request);
  }

  const Bandwidth target = is_handover ? request.req_min : request.req_max;
  if (state.free() >= target) return admitted(state, request, target, timing, {});

  const bool may_reclaim =
      is_handover || request.traffic_class.kind != ServiceKind::kBackground;
  if (!may_reclaim) return rejected(request);

  const std::int64_t capacity = config.capacity.kbps();
  const std::int64_t non_mbs = state.non_mbs_total().kbps();
  const std::int64_t floor = config.min_mbs().kbps();

  // MBS layers alone.
  const std::int64_t mbs_budget = capacity - non_mbs - target.kbps();
  if (mbs_budget >= floor) {
    std::vector<Mutation> mutations;
    apply_mbs_plan(state, Bandwidth(mbs_budget), mutations);
    return admitted(state, request, target, timing, std::move(mutations));
  }

  // MBS at its floor; the rest has to come from non-MBS calls.
  std::int64_t deficit = floor - mbs_budget;
  const std::optional<CallId> departing =
      request.carried_state ? std::optional<CallId>(request.carried_state->call_id)
                            : std::nullopt;

  std::vector<CallId> background_victims;
  for (CallId id : state.background_calls()) {
    if (deficit <= 0) break;
    if (id == departing || state.degraded_background().contains(id)) continue;
    const CallState& c = state.call(id);
    const std::int64_t gain = c.max_kbps.kbps() - c.min_kbps.kbps();
    if (gain == 0) continue;
    background_victims.push_back(id);
    deficit -= gain;
  }

  std::vector<UnicastCut> cuts;
  if (deficit > 0 && is_handover) {
    const LayerProfile& profile = config.unicast;
    for (CallId id : state.unicast_calls()) {
      if (id == departing) continue;
      const int layers = state.call(id).active_layers;
      if (layers > profile.min_layers()) cuts.push_back({id, layers, layers});
    }
    while (deficit > 0) {
      // Most layers first; ties go to the oldest call (cuts is in id order).
      auto victim = std::max_element(cuts.begin(), cuts.end(),
                                     [](const UnicastCut& a, const UnicastCut& b) {
                                       return a.layers < b.layers;
                                     });
      if (victim == cuts.end() || victim->layers <= profile.min_layers()) break;
      deficit -= profile.layer(victim->layers).kbps();
      --victim->layers;
    }
  }

  if (deficit > 0) return rejected(request);

  std::vector<Mutation> mutations;
  for (CallId id : background_victims) {
    set_call(state, id, state.call(id).min_kbps, 0, mutations);
  }
  for (const UnicastCut& cut : cuts) {
    if (cut.layers == cut.original_layers) continue;
    set_call(state, cut.id, config.unicast.bandwidth(cut.layers), cut.layers, mutations);
  }
  apply_mbs_plan(state, Bandwidth(capacity - state.non_mbs_total().kbps() - target.kbps()),
                 mutations);
  return admitted(state, request, target, timing, std::move(mutations));
}

std::vector<Mutation> release(CellState& state, CallId id) {
  state.erase_call(id);
  std::vector<Mutation> mutations;
  const SchemeConfig& config = state.config();
  if (!config.scheme.adaptive()) return mutations;

  std::int64_t free = state.free().kbps();

  // Degraded unicast calls: one layer at a time to the most degraded call.
  const LayerProfile& profile = config.unicast;
  while (!state.degraded_unicast().empty()) {
    CallId pick = 0;
    int fewest = 0;
    for (CallId cid : state.degraded_unicast()) {
      const int layers = state.call(cid).active_layers;
      if (pick == 0 || layers < fewest) {
        pick = cid;
        fewest = layers;
      }
    }
    const std::int64_t cost = profile.layer(fewest + 1).kbps();
    if (free < cost) break;
    set_call(state, pick, profile.bandwidth(fewest + 1), fewest + 1, mutations);
    free -= cost;
  }

  // Degraded background calls, oldest first.
  const std::vector<CallId> degraded(state.degraded_background().begin(),
                                     state.degraded_background().end());
  for (CallId cid : degraded) {
    const CallState& c = state.call(cid);
    const std::int64_t gain = c.max_kbps.kbps() - c.allocated.kbps();
    if (free < gain) break;
    set_call(state, cid, c.max_kbps, 0, mutations);
    free -= gain;
  }

  apply_mbs_plan(state, config.capacity - state.non_mbs_total(), mutations);
  return mutations;
}

void check_invariants(const CellState& state) {
  const SchemeConfig& config = state.config();
  auto fail = [&](const std::string& what) {
    throw InvariantViolation(what + " (t=" + std::to_string(state.clock()) + ")");
  };

  std::int64_t mbs = 0;
  for (const auto& s : state.sessions()) {
    if (s.active_layers < s.profile.min_layers() || s.active_layers > s.profile.max_layers())
      fail("session " + std::to_string(s.session_id) + " layer count out of range");
    mbs += s.bandwidth().kbps();
  }
  if (mbs != state.mbs_total().kbps()) fail("cached MBS total out of sync");
  if (mbs < config.min_mbs().kbps()) fail("MBS below its floor");

  std::int64_t non_mbs = 0;
  std::size_t unicast = 0;
  std::size_t background = 0;
  for (const auto& [id, c] : state.calls()) {
    if (id != c.call_id) fail("call map key mismatch");
    if (c.allocated < c.min_kbps || c.allocated > c.max_kbps)
      fail("call " + std::to_string(id) + " allocation outside [min, max]");
    switch (c.traffic_class.kind) {
      case ServiceKind::kVoice:
        if (c.min_kbps != c.max_kbps || c.allocated != config.voice)
          fail("voice call " + std::to_string(id) + " not at its fixed rate");
        break;
      case ServiceKind::kUnicastVideo:
        ++unicast;
        if (c.allocated != config.unicast.bandwidth(c.active_layers))
          fail("unicast call " + std::to_string(id) + " allocation disagrees with its layers");
        if (state.degraded_unicast().contains(id) != (c.allocated < c.max_kbps))
          fail("degraded unicast index out of sync");
        break;
      case ServiceKind::kBackground:
        ++background;
        if (c.allocated != c.min_kbps && c.allocated != c.max_kbps)
          fail("background call " + std::to_string(id) + " not at min or max");
        if (state.degraded_background().contains(id) != (c.allocated < c.max_kbps))
          fail("degraded background index out of sync");
        break;
    }
    non_mbs += c.allocated.kbps();
  }
  if (non_mbs != state.non_mbs_total().kbps()) fail("cached non-MBS total out of sync");
  if (unicast != state.unicast_calls().size() || background != state.background_calls().size())
    fail("class index size mismatch");

  const std::int64_t reserve =
      config.scheme.adaptive() ? mbs : std::max(mbs, config.scheme.fixed_reserve.kbps());
  if (reserve + non_mbs > config.capacity.kbps()) fail("C_B + C_nB exceeds capacity");

  if (config.scheme.adaptive()) {
    const auto plan = plan_mbs_allocation(state.sessions(),
                                          Bandwidth(config.capacity.kbps() - non_mbs));
    for (std::size_t i = 0; i < plan.layers.size(); ++i) {
      if (plan.layers[i] != state.sessions()[i].active_layers)
        fail("MBS layers differ from the fair plan for the non-MBS load");
    }
  } else {
    const Bandwidth budget = std::min({config.max_mbs(), config.capacity,
                                       config.scheme.fixed_reserve});
    if (plan_mbs_allocation(state.sessions(), budget).total.kbps() != mbs)
      fail("fixed MBS allocation changed");
  }
}

}  // namespace mbsadapt
