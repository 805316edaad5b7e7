#pragma once

// Per-run counters, derived probabilities and cross-replication summaries.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mbsadapt {

struct ClassCounters {
  std::uint64_t offered_new = 0;
  std::uint64_t admitted_new = 0;
  std::uint64_t blocked_new = 0;
  std::uint64_t offered_handover = 0;
  std::uint64_t admitted_handover = 0;
  std::uint64_t dropped_handover = 0;
  std::uint64_t completed = 0;
  std::uint64_t forced_terminations = 0;

  friend bool operator==(const ClassCounters&, const ClassCounters&) = default;
};

// Counts cover events in [warmup_s, horizon_s]; the bandwidth integrals cover
// the same window.
struct MetricsRecord {
  std::vector<ClassCounters> per_class;  // indexed by TrafficClass::slot()
  double mbs_kbps_seconds = 0.0;
  double non_mbs_kbps_seconds = 0.0;
  std::int64_t capacity_kbps = 0;
  double horizon_s = 0.0;
  double warmup_s = 0.0;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t seed = 0;
  std::uint64_t events = 0;

  double measured_s() const { return horizon_s - warmup_s; }
  ClassCounters totals() const;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct DerivedMetrics {
  std::vector<double> block;  // per class: blocked / offered new
  double drop = 0.0;          // all dropped handovers / all offered handovers
  // Dropped handovers over admitted new calls. A call leaves the system at
  // its first drop, so each call contributes at most one termination.
  double forced = 0.0;
  // (blocked new + dropped handovers) / offered new: share of originating
  // calls that never complete.
  double forced_alt = 0.0;
  double utilization = 0.0;  // integral of (C_B + C_nB) / (C * measured time)
  double handovers_per_admitted = 0.0;  // offered handovers / admitted new
};

// Ratios with a zero denominator are reported as 0.
DerivedMetrics derive(const MetricsRecord& record);

struct Estimate {
  double mean = 0.0;
  std::optional<double> half_width;  // 95% Student-t; empty when n == 1

  double lower() const { return mean - half_width.value_or(0.0); }
  double upper() const { return mean + half_width.value_or(0.0); }
};

struct MetricsSummary {
  std::vector<Estimate> block;
  Estimate drop;
  Estimate forced;
  Estimate forced_alt;
  Estimate utilization;
  std::size_t replications = 0;
};

// Sample mean and 95% confidence half-width per derived metric. Throws
// ConfigError for an empty list or mixed config fingerprints.
MetricsSummary aggregate(std::span<const MetricsRecord> records);

// Mean and 95% Student-t half-width of a sample.
Estimate estimate(std::span<const double> samples);

}  // namespace mbsadapt
