#include "mbsadapt/sweep.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

namespace mbsadapt {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_ci(const Estimate& e) { return e.half_width ? fmt(*e.half_width) : "NA"; }

}  // namespace

RunSpec run_spec_for(const LoadedConfig& config, const Scheme& scheme, double lambda) {
  RunSpec spec;
  spec.config = config.cell;
  spec.config.scheme = scheme;
  spec.rates = config.rates;
  spec.rates.total_new_rate = lambda;
  spec.horizon_s = config.sweep.horizon_s;
  spec.warmup_s = config.sweep.warmup_s;
  spec.seed = config.sweep.seed_base;
  return spec;
}

std::vector<SweepRow> compute_sweep(const LoadedConfig& config) {
  config.sweep.validate();
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.sweep.replications));
  std::iota(seeds.begin(), seeds.end(), config.sweep.seed_base);

  std::vector<SweepRow> rows;
  for (const Scheme& scheme : config.sweep.schemes) {
    for (double lambda : config.sweep.lambda_values) {
      const RunSpec spec = run_spec_for(config, scheme, lambda);
      const auto records = replicate(spec, seeds, config.sweep.threads);
      rows.push_back({scheme, lambda, aggregate(records)});
    }
  }
  return rows;
}

void write_csv(std::ostream& os, const LoadedConfig& config, std::span<const SweepRow> rows) {
  os << "# mbsadapt " << version() << "\n";
  std::istringstream effective(to_config_text(config));
  for (std::string line; std::getline(effective, line);) os << "# " << line << "\n";

  os << "scheme,lambda_total";
  for (std::size_t slot = 0; slot < config.cell.class_count(); ++slot)
    os << ",P_block_" << to_string(TrafficClass::from_slot(slot));
  os << ",P_drop,P_drop_CI,P_forced,P_forced_CI,P_forced_alt,utilization,replications,seed_base\n";

  for (const SweepRow& row : rows) {
    const MetricsSummary& s = row.summary;
    os << row.scheme.name() << "," << fmt(row.lambda);
    for (const Estimate& b : s.block) os << "," << fmt(b.mean);
    os << "," << fmt(s.drop.mean) << "," << fmt_ci(s.drop) << "," << fmt(s.forced.mean) << ","
       << fmt_ci(s.forced) << "," << fmt(s.forced_alt.mean) << "," << fmt(s.utilization.mean)
       << "," << s.replications << "," << config.sweep.seed_base << "\n";
  }
}

void run_sweep(const LoadedConfig& config, std::ostream& os) {
  const auto rows = compute_sweep(config);
  write_csv(os, config, rows);
}

}  // namespace mbsadapt
