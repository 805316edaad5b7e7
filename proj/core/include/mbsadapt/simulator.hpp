#pragma once

// Discrete-event driver for a single cell.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mbsadapt/metrics.hpp"
#include "mbsadapt/model.hpp"
#include "mbsadapt/traffic.hpp"

namespace mbsadapt {

enum class EventKind : std::uint8_t { kNewArrival, kDwellExpiry, kCallEnd };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;  // insertion order; breaks time ties
  EventKind kind = EventKind::kNewArrival;
  CallId call_id = 0;
};

struct RunSpec {
  SchemeConfig config;
  TrafficRates rates;
  double horizon_s = 2.0e5;
  double warmup_s = 2.0e4;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

#ifdef NDEBUG
inline constexpr bool kCheckInvariantsByDefault = false;
#else
inline constexpr bool kCheckInvariantsByDefault = true;
#endif

struct RunOptions {
  // Runs check_invariants() and the counter identities after every event.
  bool check_invariants = kCheckInvariantsByDefault;
  // Called after every processed event.
  std::function<void(const CellState&, const Event&, const MetricsRecord&)> observer;
};

// Simulates [0, horizon_s]. Counters and bandwidth integrals only cover
// [warmup_s, horizon_s]. A run is a pure function of the spec.
//
// Handover is wrap-around: when a call's dwell expires before its duration,
// it is re-offered to the same cell as a handover carrying its residual
// duration. The re-offer is decided while the departing call still holds its
// allocation (the target cell does not yet contain the call); the old
// allocation is released right after. A dropped re-offer is a forced
// termination.
MetricsRecord run(const RunSpec& spec, const RunOptions& options = {});

// One run per seed, in seed order. threads == 0 uses the hardware
// concurrency; results do not depend on the thread count. Throws ConfigError
// on duplicate seeds.
std::vector<MetricsRecord> replicate(const RunSpec& spec, std::span<const std::uint64_t> seeds,
                                     unsigned threads = 0);

// Stable hash of everything in the spec except the seed.
std::uint64_t config_fingerprint(const RunSpec& spec);

}  // namespace mbsadapt
