#include "mbsadapt/metrics.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "mbsadapt/errors.hpp"

namespace mbsadapt {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ClassCounters MetricsRecord::totals() const {
  ClassCounters t;
  for (const auto& c : per_class) {
    t.offered_new += c.offered_new;
    t.admitted_new += c.admitted_new;
    t.blocked_new += c.blocked_new;
    t.offered_handover += c.offered_handover;
    t.admitted_handover += c.admitted_handover;
    t.dropped_handover += c.dropped_handover;
    t.completed += c.completed;
    t.forced_terminations += c.forced_terminations;
  }
  return t;
}

DerivedMetrics derive(const MetricsRecord& record) {
  DerivedMetrics d;
  for (const auto& c : record.per_class)
    d.block.push_back(ratio(static_cast<double>(c.blocked_new), static_cast<double>(c.offered_new)));

  const ClassCounters t = record.totals();
  const auto admitted_new = static_cast<double>(t.admitted_new);
  d.drop = ratio(static_cast<double>(t.dropped_handover), static_cast<double>(t.offered_handover));
  d.forced = ratio(static_cast<double>(t.forced_terminations), admitted_new);
  d.forced_alt = ratio(static_cast<double>(t.blocked_new + t.dropped_handover),
                       static_cast<double>(t.offered_new));
  d.handovers_per_admitted = ratio(static_cast<double>(t.offered_handover), admitted_new);
  d.utilization = ratio(record.mbs_kbps_seconds + record.non_mbs_kbps_seconds,
                        static_cast<double>(record.capacity_kbps) * record.measured_s());
  return d;
}

Estimate estimate(std::span<const double> samples) {
  Estimate e;
  const auto n = samples.size();
  if (n == 0) return e;
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / static_cast<double>(n);
  if (n < 2) return e;
  double ss = 0.0;
  for (double x : samples) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.975);
  e.half_width = t * sd / std::sqrt(static_cast<double>(n));
  return e;
}

MetricsSummary aggregate(std::span<const MetricsRecord> records) {
  if (records.empty()) throw ConfigError("aggregate: no records");
  for (const auto& r : records) {
    if (r.config_fingerprint != records.front().config_fingerprint)
      throw ConfigError("aggregate: records come from different configurations");
  }

  std::vector<DerivedMetrics> derived;
  derived.reserve(records.size());
  for (const auto& r : records) derived.push_back(derive(r));

  auto column = [&](auto&& get) {
    std::vector<double> xs;
    xs.reserve(derived.size());
    for (const auto& d : derived) xs.push_back(get(d));
    return estimate(xs);
  };

  MetricsSummary s;
  s.replications = records.size();
  for (std::size_t k = 0; k < derived.front().block.size(); ++k)
    s.block.push_back(column([k](const DerivedMetrics& d) { return d.block[k]; }));
  s.drop = column([](const DerivedMetrics& d) { return d.drop; });
  s.forced = column([](const DerivedMetrics& d) { return d.forced; });
  s.forced_alt = column([](const DerivedMetrics& d) { return d.forced_alt; });
  s.utilization = column([](const DerivedMetrics& d) { return d.utilization; });
  return s;
}

}  // namespace mbsadapt
