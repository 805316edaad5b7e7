#pragma once

// Admission ladder with handover priority, restoration on departure, and the
// fixed-reserve baselines.

#include <cstdint>
#include <limits>
#include <vector>

#include "mbsadapt/model.hpp"

namespace mbsadapt {

struct Mutation {
  enum class Target : std::uint8_t { kMbsSession, kCall };

  Target target = Target::kCall;
  std::uint64_t id = 0;  // session id or call id
  Bandwidth old_kbps;
  Bandwidth new_kbps;

  friend bool operator==(const Mutation&, const Mutation&) = default;
};

enum class Outcome : std::uint8_t { kAdmitted, kBlocked, kDropped };

struct AdmissionDecision {
  Outcome outcome = Outcome::kBlocked;
  CallId call_id = 0;  // valid when admitted
  Bandwidth initial_allocation;
  std::vector<Mutation> mutations;

  bool admitted() const { return outcome == Outcome::kAdmitted; }
};

// Lifecycle of the admitted call, relative to the cell clock.
struct CallTiming {
  double duration_s = 0.0;
  double dwell_s = std::numeric_limits<double>::infinity();
};

// Target T is req_max for new calls and req_min for handovers (adaptive
// scheme only; fixed schemes use req_max for both). The adaptive ladder tries,
// until T fits:
//   1. free bandwidth;
//   2. MBS layer removal down to the session floor (handovers, new voice and
//      new unicast);
//   3. background calls max -> min, oldest first (same eligibility);
//   4. unicast enhanced layers, fair round-robin down to the minimum
//      (handovers only).
// The call is admitted at exactly T. On rejection `state` is untouched. A
// handover's carried call is never used as a degradation victim.
AdmissionDecision admit(CellState& state, const Request& request,
                        const CallTiming& timing = {});

// Removes the call and hands the freed bandwidth back in reverse ladder order:
// degraded unicast layers (most degraded first), degraded background calls
// (oldest first), then the MBS sessions via a fresh fair plan. Returns the
// restorations applied. Throws NotFoundError for an unknown id.
std::vector<Mutation> release(CellState& state, CallId id);

// Throws InvariantViolation naming the first broken invariant: pool
// conservation, MBS floor, per-call ranges, cached totals and index sets, and
// (adaptive scheme) MBS layers equal to the fair plan for C - C_nB.
void check_invariants(const CellState& state);

}  // namespace mbsadapt
