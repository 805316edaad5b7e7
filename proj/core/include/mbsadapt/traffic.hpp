#pragma once

// Poisson arrivals, exponential holding and dwell times, and the wrap-around
// handover re-offer.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mbsadapt/model.hpp"

namespace mbsadapt {

using Rng = std::mt19937_64;

// Per-class vectors are indexed by TrafficClass::slot().
struct TrafficRates {
  double total_new_rate = 0.0;  // calls per second, all classes
  std::vector<std::int64_t> class_weights = {5, 1, 4};
  std::vector<double> mean_duration_s = {120.0, 300.0, 180.0};
  double mean_dwell_s = 540.0;

  // Throws ConfigError unless every per-class vector has `class_count`
  // entries, weights are non-negative with a positive sum, means are
  // positive and total_new_rate is non-negative.
  void validate(std::size_t class_count) const;

  friend bool operator==(const TrafficRates&, const TrafficRates&) = default;
};

// Exponential sample with mean 1/rate. Throws ConfigError for rate <= 0.
double next_interarrival(Rng& rng, double rate);

// Draws a class with probability weight / sum(weights), exactly: an integer
// is drawn uniformly from [0, sum) and mapped through the cumulative weights.
TrafficClass pick_class(Rng& rng, std::span<const std::int64_t> weights);

struct Lifecycle {
  double duration_s = 0.0;
  double dwell_s = 0.0;
};

// Independent exponential call duration (class mean) and cell dwell.
Lifecycle lifecycle_samples(Rng& rng, TrafficClass c, const TrafficRates& rates);

// Residual holding time left when the call's dwell expires.
double residual_at_dwell_expiry(const CallState& call);

// Handover request for a call whose dwell expired before its duration ran
// out; carries the call and its remaining duration. Returns nullopt when the
// call finishes at or before its dwell deadline (completion wins ties).
std::optional<Request> handover_reoffer(const CallState& call, const SchemeConfig& config);

}  // namespace mbsadapt
