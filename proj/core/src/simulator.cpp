#include "mbsadapt/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include "mbsadapt/admission.hpp"
#include "mbsadapt/config.hpp"
#include "mbsadapt/errors.hpp"

namespace mbsadapt {
namespace {

struct LaterEvent {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  Simulation(const RunSpec& spec, const RunOptions& options)
      : spec_(spec), options_(options), state_(spec.config), rng_(spec.seed) {
    record_.per_class.resize(spec.config.class_count());
    record_.capacity_kbps = spec.config.capacity.kbps();
    record_.horizon_s = spec.horizon_s;
    record_.warmup_s = spec.warmup_s;
    record_.config_fingerprint = config_fingerprint(spec);
    record_.seed = spec.seed;
  }

  MetricsRecord run() {
    if (spec_.rates.total_new_rate > 0.0) schedule_arrival(0.0);
    while (!queue_.empty() && queue_.top().time <= spec_.horizon_s) {
      const Event ev = queue_.top();
      queue_.pop();
      advance_to(ev.time);
      dispatch(ev);
      ++record_.events;
      if (options_.check_invariants) verify();
      if (options_.observer) options_.observer(state_, ev, record_);
    }
    advance_to(spec_.horizon_s);
    return std::move(record_);
  }

 private:
  bool measuring() const { return state_.clock() >= spec_.warmup_s; }

  void push(double time, EventKind kind, CallId id) {
    queue_.push(Event{time, next_seq_++, kind, id});
  }

  void schedule_arrival(double now) {
    push(now + next_interarrival(rng_, spec_.rates.total_new_rate), EventKind::kNewArrival, 0);
  }

  // Exactly one pending event per call: whichever of completion and dwell
  // expiry comes first, completion on ties.
  void schedule_call(CallId id) {
    const CallState& c = state_.call(id);
    const double end = c.admit_time + c.residual_duration;
    if (end <= c.dwell_deadline)
      push(end, EventKind::kCallEnd, id);
    else
      push(c.dwell_deadline, EventKind::kDwellExpiry, id);
  }

  void advance_to(double t) {
    const double from = std::max(last_time_, spec_.warmup_s);
    const double to = std::min(t, spec_.horizon_s);
    if (to > from) {
      record_.mbs_kbps_seconds += static_cast<double>(state_.mbs_total().kbps()) * (to - from);
      record_.non_mbs_kbps_seconds +=
          static_cast<double>(state_.non_mbs_total().kbps()) * (to - from);
    }
    last_time_ = std::max(last_time_, t);
    state_.set_clock(t);
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::kNewArrival:
        on_arrival(ev.time);
        break;
      case EventKind::kCallEnd:
        on_call_end(ev.call_id);
        break;
      case EventKind::kDwellExpiry:
        on_dwell_expiry(ev.call_id);
        break;
    }
  }

  void on_arrival(double now) {
    schedule_arrival(now);
    const TrafficClass cls = pick_class(rng_, spec_.rates.class_weights);
    const Lifecycle life = lifecycle_samples(rng_, cls, spec_.rates);
    const Request req = make_request(spec_.config, cls, CallOrigin::kNew);
    const AdmissionDecision d = admit(state_, req, {life.duration_s, life.dwell_s});
    auto& counters = record_.per_class[cls.slot()];
    const bool count = measuring();
    if (count) ++counters.offered_new;
    if (d.admitted()) {
      if (count) ++counters.admitted_new;
      schedule_call(d.call_id);
    } else if (count) {
      ++counters.blocked_new;
    }
  }

  void on_call_end(CallId id) {
    const std::size_t slot = state_.call(id).traffic_class.slot();
    release(state_, id);
    if (measuring()) ++record_.per_class[slot].completed;
  }

  void on_dwell_expiry(CallId id) {
    const CallState& call = state_.call(id);
    const std::size_t slot = call.traffic_class.slot();
    std::optional<Request> req = handover_reoffer(call, spec_.config);
    if (!req) {
      // Unreachable with schedule_call(); treat as a completion.
      release(state_, id);
      if (measuring()) ++record_.per_class[slot].completed;
      return;
    }
    const double residual = req->carried_state->residual_duration;
    const double dwell =
        std::exponential_distribution<double>(1.0 / spec_.rates.mean_dwell_s)(rng_);
    const AdmissionDecision d = admit(state_, *req, {residual, dwell});
    release(state_, id);

    auto& counters = record_.per_class[slot];
    const bool count = measuring();
    if (count) ++counters.offered_handover;
    if (d.admitted()) {
      if (count) ++counters.admitted_handover;
      schedule_call(d.call_id);
    } else if (count) {
      ++counters.dropped_handover;
      ++counters.forced_terminations;
    }
  }

  void verify() const {
    check_invariants(state_);
    for (const auto& c : record_.per_class) {
      if (c.admitted_new + c.blocked_new != c.offered_new ||
          c.admitted_handover + c.dropped_handover != c.offered_handover)
        throw InvariantViolation("event counter identity broken");
    }
    if (!queue_.empty() && queue_.top().time < state_.clock())
      throw InvariantViolation("event scheduled in the past");
  }

  const RunSpec& spec_;
  const RunOptions& options_;
  CellState state_;
  Rng rng_;
  std::priority_queue<Event, std::vector<Event>, LaterEvent> queue_;
  std::uint64_t next_seq_ = 0;
  double last_time_ = 0.0;
  MetricsRecord record_;
};

}  // namespace

void RunSpec::validate() const {
  config.validate();
  rates.validate(config.class_count());
  if (!(horizon_s > 0.0) || !std::isfinite(horizon_s))
    throw ConfigError("sim.horizon_s: must be a finite positive number");
  if (!(warmup_s >= 0.0) || !(warmup_s < horizon_s))
    throw ConfigError("sim.warmup_s: must lie in [0, horizon)");
}

MetricsRecord run(const RunSpec& spec, const RunOptions& options) {
  spec.validate();
  return Simulation(spec, options).run();
}

std::vector<MetricsRecord> replicate(const RunSpec& spec, std::span<const std::uint64_t> seeds,
                                     unsigned threads) {
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("replicate: seeds must be distinct");
  spec.validate();

  std::vector<MetricsRecord> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  auto one = [&](std::size_t i) {
    try {
      RunSpec s = spec;
      s.seed = seeds[i];
      out[i] = run(s);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, seeds.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::uint64_t config_fingerprint(const RunSpec& spec) {
  std::ostringstream os;
  os << to_config_text(spec.config, spec.rates);
  os.precision(17);
  os << "sim.horizon_s = " << spec.horizon_s << "\nsim.warmup_s = " << spec.warmup_s << "\n";
  // FNV-1a, 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mbsadapt
