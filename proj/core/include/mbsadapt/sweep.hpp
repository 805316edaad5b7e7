#pragma once

// Load sweeps over (scheme, arrival rate) and their CSV form.

#include <ostream>
#include <span>
#include <vector>

#include "mbsadapt/config.hpp"
#include "mbsadapt/metrics.hpp"
#include "mbsadapt/simulator.hpp"

namespace mbsadapt {

struct SweepRow {
  Scheme scheme;
  double lambda = 0.0;
  MetricsSummary summary;
};

// Replication r of every row uses seed seed_base + r, so all schemes see the
// same arrival streams. Rows are ordered by scheme, then by lambda.
std::vector<SweepRow> compute_sweep(const LoadedConfig& config);

RunSpec run_spec_for(const LoadedConfig& config, const Scheme& scheme, double lambda);

// '#' comment header with the version and effective configuration, a column
// row, then one row per SweepRow. Missing confidence intervals print as NA.
void write_csv(std::ostream& os, const LoadedConfig& config, std::span<const SweepRow> rows);

void run_sweep(const LoadedConfig& config, std::ostream& os);

}  // namespace mbsadapt
