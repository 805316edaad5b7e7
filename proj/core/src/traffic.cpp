#include "mbsadapt/traffic.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mbsadapt/errors.hpp"

namespace mbsadapt {

void TrafficRates::validate(std::size_t class_count) const {
  if (!(total_new_rate >= 0.0) || !std::isfinite(total_new_rate))
    throw ConfigError("arrival rate must be a finite non-negative number");
  if (class_weights.size() != class_count)
    throw ConfigError("arrival.ratio: expected " + std::to_string(class_count) + " weights");
  std::int64_t sum = 0;
  for (auto w : class_weights) {
    if (w < 0) throw ConfigError("arrival.ratio: weights must be non-negative");
    sum += w;
  }
  if (sum == 0) throw ConfigError("arrival.ratio: weights must not all be zero");
  if (mean_duration_s.size() != class_count)
    throw ConfigError("duration: expected " + std::to_string(class_count) + " class means");
  for (double d : mean_duration_s)
    if (!(d > 0.0)) throw ConfigError("duration: mean call durations must be > 0");
  if (!(mean_dwell_s > 0.0)) throw ConfigError("dwell_s: must be > 0");
}

double next_interarrival(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw ConfigError("arrival rate must be > 0");
  return std::exponential_distribution<double>(rate)(rng);
}

TrafficClass pick_class(Rng& rng, std::span<const std::int64_t> weights) {
  std::int64_t sum = 0;
  for (auto w : weights) {
    if (w < 0) throw ConfigError("class weights must be non-negative");
    sum += w;
  }
  if (sum == 0) throw ConfigError("class weights must not all be zero");
  std::int64_t draw = std::uniform_int_distribution<std::int64_t>(0, sum - 1)(rng);
  for (std::size_t slot = 0; slot < weights.size(); ++slot) {
    if (draw < weights[slot]) return TrafficClass::from_slot(slot);
    draw -= weights[slot];
  }
  return TrafficClass::from_slot(weights.size() - 1);
}

Lifecycle lifecycle_samples(Rng& rng, TrafficClass c, const TrafficRates& rates) {
  Lifecycle l;
  l.duration_s = std::exponential_distribution<double>(1.0 / rates.mean_duration_s.at(c.slot()))(rng);
  l.dwell_s = std::exponential_distribution<double>(1.0 / rates.mean_dwell_s)(rng);
  return l;
}

double residual_at_dwell_expiry(const CallState& call) {
  return call.residual_duration - (call.dwell_deadline - call.admit_time);
}

std::optional<Request> handover_reoffer(const CallState& call, const SchemeConfig& config) {
  if (call.admit_time + call.residual_duration <= call.dwell_deadline) return std::nullopt;
  Request r = make_request(config, call.traffic_class, CallOrigin::kHandover);
  r.carried_state = call;
  r.carried_state->residual_duration = residual_at_dwell_expiry(call);
  return r;
}

}  // namespace mbsadapt
