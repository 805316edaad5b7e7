// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are fixed below and are not configurable.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mbsadapt/admission.hpp"
#include "mbsadapt/allocation.hpp"
#include "mbsadapt/analytic.hpp"
#include "mbsadapt/config.hpp"
#include "mbsadapt/errors.hpp"
#include "mbsadapt/simulator.hpp"
#include "mbsadapt/sweep.hpp"
#include "support/fair_plan_oracle.hpp"

namespace {

using namespace mbsadapt;

// Criterion 1.
constexpr double kErlangRelTol = 0.10;
constexpr double kErlangAbsTol = 0.003;
constexpr double kErlangMaxSeconds = 30.0;
// Criterion 2.
constexpr double kLossRelTol = 0.10;
constexpr double kLossMaxSeconds = 60.0;
// Criterion 3.
constexpr double kNegligibleDrop = 1e-2;
constexpr double kBaselineHighDrop = 5e-2;
// Criteria 3, 4 and 5: "high load" is the top three sweep points.
constexpr std::size_t kHighLoadPoints = 3;
// Criterion 6.
constexpr int kMaxSessions = 4;
constexpr int kMaxLayers = 3;
constexpr int kHomogeneousTrials = 100'000;
// Criterion 7.
constexpr std::uint64_t kSoakEvents = 1'000'000;
// Criterion 9: adjacent points may dip by up to one CI half-width.
constexpr double kMonotoneSlackHalfWidths = 1.0;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::vector<std::uint64_t> seeds(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

// Cell with no MBS sessions and a zero fixed reserve: a plain loss system.
SchemeConfig plain_cell(std::int64_t capacity_kbps) {
  SchemeConfig c;
  c.capacity = Bandwidth(capacity_kbps);
  c.mbs_sessions.clear();
  c.scheme = Scheme::fixed_mbs(0_kbps);
  return c;
}

Verdict erlang_b_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  RunSpec spec;
  spec.config = plain_cell(640);
  spec.rates.class_weights = {1, 0, 0};
  spec.rates.mean_dwell_s = 1e12;
  spec.rates.total_new_rate = 5.0 / spec.rates.mean_duration_s[0];
  const auto records = replicate(spec, seeds(10));
  const double simulated = aggregate(records).block[0].mean;
  const double exact = erlang_b(10, 5.0);
  const double tol = std::max(kErlangRelTol * exact, kErlangAbsTol);
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = std::abs(simulated - exact) <= tol && elapsed < kErlangMaxSeconds;
  v.detail = "P_block " + num(simulated) + " vs erlang_b(10,5) " + num(exact) + " (tol " +
             num(tol) + "), " + num(elapsed) + " s";
  return v;
}

Verdict loss_network_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  RunSpec spec;
  spec.config = plain_cell(640);
  spec.config.background = {{0, 128_kbps, Fraction{0, 1}}};
  spec.rates.mean_dwell_s = 1e12;
  // Voice 3 Erlang at 0.025/s, background 2 Erlang at 1/90 per second.
  spec.rates.class_weights = {9, 0, 4};
  spec.rates.total_new_rate = 13.0 / 360.0;
  const std::array<int, 2> demands = {1, 2};
  const std::array<double, 2> loads = {3.0, 2.0};
  const auto exact = loss_network_blocking(10, demands, loads);

  const MetricsSummary s = aggregate(replicate(spec, seeds(10)));
  const std::array<double, 2> simulated = {s.block[0].mean, s.block[2].mean};
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = elapsed < kLossMaxSeconds;
  for (std::size_t k = 0; k < 2; ++k)
    v.pass = v.pass && std::abs(simulated[k] - exact[k]) <= kLossRelTol * exact[k];
  v.detail = "voice " + num(simulated[0]) + " vs " + num(exact[0]) + ", background " +
             num(simulated[1]) + " vs " + num(exact[1]) + " (rel tol " + num(kLossRelTol) +
             "), " + num(elapsed) + " s";
  return v;
}

struct DefaultSweep {
  LoadedConfig config;
  std::vector<SweepRow> rows;
  double seconds = 0.0;

  const SweepRow& at(const Scheme& scheme, std::size_t point) const {
    std::size_t s = 0;
    while (!(config.sweep.schemes[s] == scheme)) ++s;
    return rows[s * config.sweep.lambda_values.size() + point];
  }
  std::size_t points() const { return config.sweep.lambda_values.size(); }
  bool high(std::size_t i) const { return i + kHighLoadPoints >= points(); }
};

const Scheme kProposed = Scheme::proposed();
const Scheme kFixed6 = Scheme::fixed_mbs(6_mbps);
const Scheme kFixed14 = Scheme::fixed_mbs(14_mbps);

Verdict drop_ordering(const DefaultSweep& sw) {
  Verdict v;
  int separated = 0;
  for (std::size_t i = 0; i < sw.points(); ++i) {
    const Estimate& p = sw.at(kProposed, i).summary.drop;
    for (const Scheme& base : {kFixed6, kFixed14}) {
      const Estimate& b = sw.at(base, i).summary.drop;
      const std::string where = base.name() + " at lambda " + num(sw.rows[i].lambda);
      if (p.mean > b.mean) {
        v.pass = false;
        v.detail += " proposed above " + where + ";";
      }
      if (sw.high(i)) {
        if (p.upper() < b.lower()) {
          ++separated;
        } else {
          v.pass = false;
          v.detail += " CI overlap with " + where + ";";
        }
      }
      if (b.mean > kBaselineHighDrop && p.mean >= kNegligibleDrop) {
        v.pass = false;
        v.detail += " proposed not negligible where " + where + " exceeds 5e-2;";
      }
    }
  }
  const std::size_t top = sw.points() - 1;
  v.detail += " top point P_drop: proposed " + num(sw.at(kProposed, top).summary.drop.mean) +
              ", fixed:6000 " + num(sw.at(kFixed6, top).summary.drop.mean) + ", fixed:14000 " +
              num(sw.at(kFixed14, top).summary.drop.mean) + "; " + std::to_string(separated) +
              "/6 high-load CI separations";
  return v;
}

Verdict forced_ordering(const DefaultSweep& sw) {
  Verdict v;
  for (std::size_t i = 0; i < sw.points(); ++i) {
    if (!sw.high(i)) continue;
    const Estimate& p = sw.at(kProposed, i).summary.forced;
    for (const Scheme& base : {kFixed6, kFixed14}) {
      const Estimate& b = sw.at(base, i).summary.forced;
      if (!(p.mean < b.mean && p.upper() < b.lower())) {
        v.pass = false;
        v.detail += " not separated from " + base.name() + " at lambda " +
                    num(sw.rows[i].lambda) + ";";
      }
    }
  }
  const std::size_t top = sw.points() - 1;
  v.detail += " top point P_forced: proposed " +
              num(sw.at(kProposed, top).summary.forced.mean) + ", fixed:6000 " +
              num(sw.at(kFixed6, top).summary.forced.mean) + ", fixed:14000 " +
              num(sw.at(kFixed14, top).summary.forced.mean);
  return v;
}

Verdict utilization_ordering(const DefaultSweep& sw) {
  Verdict v;
  for (std::size_t i = 0; i < sw.points(); ++i) {
    const double p = sw.at(kProposed, i).summary.utilization.mean;
    const double f14 = sw.at(kFixed14, i).summary.utilization.mean;
    const double f6 = sw.at(kFixed6, i).summary.utilization.mean;
    if (p < f14) {
      v.pass = false;
      v.detail += " below fixed:14000 at lambda " + num(sw.rows[i].lambda) + " (" + num(p) +
                  " < " + num(f14) + ");";
    }
    if (sw.high(i) && p < f6) {
      v.pass = false;
      v.detail += " below fixed:6000 at lambda " + num(sw.rows[i].lambda) + ";";
    }
  }
  const std::size_t top = sw.points() - 1;
  v.detail += " top point utilization: proposed " +
              num(sw.at(kProposed, top).summary.utilization.mean) + ", fixed:6000 " +
              num(sw.at(kFixed6, top).summary.utilization.mean) + ", fixed:14000 " +
              num(sw.at(kFixed14, top).summary.utilization.mean);
  return v;
}

Verdict monotonicity(const DefaultSweep& sw) {
  Verdict v;
  int pairs = 0;
  for (const Scheme& scheme : sw.config.sweep.schemes) {
    std::vector<std::function<const Estimate&(const MetricsSummary&)>> metrics;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < sw.config.cell.class_count(); ++k) {
      metrics.emplace_back([k](const MetricsSummary& s) -> const Estimate& { return s.block[k]; });
      names.push_back("P_block_" + to_string(TrafficClass::from_slot(k)));
    }
    metrics.emplace_back([](const MetricsSummary& s) -> const Estimate& { return s.drop; });
    names.emplace_back("P_drop");
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      for (std::size_t i = 0; i + 1 < sw.points(); ++i) {
        const Estimate& a = metrics[m](sw.at(scheme, i).summary);
        const Estimate& b = metrics[m](sw.at(scheme, i + 1).summary);
        const double slack = kMonotoneSlackHalfWidths *
                             std::max(a.half_width.value_or(0.0), b.half_width.value_or(0.0));
        ++pairs;
        if (b.mean < a.mean - slack) {
          v.pass = false;
          v.detail += " " + scheme.name() + " " + names[m] + " falls from " + num(a.mean) +
                      " to " + num(b.mean) + " between lambda " +
                      num(sw.config.sweep.lambda_values[i]) + " and " +
                      num(sw.config.sweep.lambda_values[i + 1]) + " (slack " + num(slack) + ");";
        }
      }
    }
  }
  v.detail += " " + std::to_string(pairs) + " adjacent pairs checked";
  return v;
}

// Every shape with up to kMaxSessions sessions of up to kMaxLayers layers:
// layer counts, minimum layers and popularity orders enumerated, layer costs
// drawn per shape (one homogeneous and one mixed draw).
Verdict allocation_equivalence() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> cost(1, 9);
  std::uint64_t shapes = 0;
  std::uint64_t budgets = 0;
  std::uint64_t mismatches = 0;

  std::vector<std::pair<int, int>> per_session;  // (layers, min_layers)
  for (int n = 0; n <= kMaxLayers; ++n)
    for (int m = 0; m <= n; ++m) per_session.emplace_back(n, m);

  for (int count = 1; count <= kMaxSessions; ++count) {
    std::vector<std::size_t> pick(static_cast<std::size_t>(count), 0);
    while (true) {
      std::vector<int> ranks(static_cast<std::size_t>(count));
      std::iota(ranks.begin(), ranks.end(), 1);
      do {
        for (int variant = 0; variant < 2; ++variant) {
          const int shared = cost(rng);
          std::vector<LayerProfile> profiles;
          for (std::size_t i : pick) {
            std::vector<Bandwidth> layers;
            for (int k = 0; k < per_session[i].first; ++k)
              layers.emplace_back(variant == 0 ? shared : cost(rng));
            profiles.emplace_back(Bandwidth(cost(rng)), layers, per_session[i].second);
          }
          const auto sessions = testing::make_sessions(ranks, profiles);
          const auto totals = testing::fair_totals(sessions);
          std::int64_t lo = 0;
          std::int64_t hi = 0;
          std::int64_t span = 0;
          for (const auto& p : profiles) {
            lo += p.min_bandwidth().kbps();
            hi += p.max_bandwidth().kbps();
            for (const auto& l : p.enhanced()) span = std::max(span, l.kbps());
          }
          ++shapes;
          for (std::int64_t b = lo; b <= hi + span; ++b) {
            ++budgets;
            const auto plan = plan_mbs_allocation(sessions, Bandwidth(b));
            if (plan.total.kbps() != testing::best_fair_total(totals, b).value() ||
                !testing::is_fair(sessions, plan.layers))
              ++mismatches;
          }
          if (lo > 0) {
            bool threw = false;
            try {
              plan_mbs_allocation(sessions, Bandwidth(lo - 1));
            } catch (const InfeasibleMbsFloor&) {
              threw = true;
            }
            if (!threw) ++mismatches;
          }
        }
      } while (std::next_permutation(ranks.begin(), ranks.end()));

      std::size_t k = 0;
      while (k < pick.size() && pick[k] + 1 == per_session.size()) pick[k++] = 0;
      if (k == pick.size()) break;
      ++pick[k];
    }
  }

  std::uint64_t spread_violations = 0;
  for (int trial = 0; trial < kHomogeneousTrials; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 16)(rng);
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int min_layers = std::uniform_int_distribution<int>(0, n)(rng);
    const LayerProfile p(Bandwidth(std::uniform_int_distribution<int>(1, 1000)(rng)),
                         std::vector<Bandwidth>(static_cast<std::size_t>(n),
                                                Bandwidth(std::uniform_int_distribution<int>(1, 500)(rng))),
                         min_layers);
    std::vector<int> ranks(static_cast<std::size_t>(m));
    std::iota(ranks.begin(), ranks.end(), 1);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    const auto sessions =
        testing::make_sessions(ranks, std::vector<LayerProfile>(ranks.size(), p));
    const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(
        p.min_bandwidth().kbps() * m, p.max_bandwidth().kbps() * m)(rng);
    const auto plan = plan_mbs_allocation(sessions, Bandwidth(budget));
    const auto [lo, hi] = std::minmax_element(plan.layers.begin(), plan.layers.end());
    if (*hi - *lo > 1 || !testing::is_fair(sessions, plan.layers)) ++spread_violations;
  }

  v.pass = mismatches == 0 && spread_violations == 0;
  v.detail = std::to_string(shapes) + " shapes, " + std::to_string(budgets) + " budgets, " +
             std::to_string(mismatches) + " mismatches; " +
             std::to_string(kHomogeneousTrials) + " homogeneous instances, " +
             std::to_string(spread_violations) + " spread violations";
  return v;
}

Verdict invariant_soak() {
  Verdict v;
  std::uint64_t events = 0;
  std::uint64_t violations = 0;
  std::string first;
  std::mt19937_64 pick(77);
  const std::array<Scheme, 3> schemes = {kProposed, kFixed6, kFixed14};
  for (const Scheme& scheme : schemes) {
    RunSpec spec;
    spec.config.scheme = scheme;
    spec.rates.total_new_rate = std::uniform_real_distribution<double>(0.6, 1.2)(pick);
    spec.seed = pick();
    spec.warmup_s = 0.0;
    // The adaptive scheme carries the full soak; the baselines a third each.
    const std::uint64_t target = scheme.adaptive() ? kSoakEvents : kSoakEvents / 3;
    spec.horizon_s = static_cast<double>(target);
    RunOptions options;
    options.check_invariants = true;
    std::uint64_t seen = 0;
    options.observer = [&](const CellState& s, const Event&, const MetricsRecord&) {
      ++seen;
      const PoolSnapshot p = snapshot_pools(s);
      const auto& c = s.config();
      const Bandwidth reserve = c.scheme.adaptive() ? p.mbs : p.mbs + p.idle_reserve;
      if (reserve + p.non_mbs > c.capacity || p.mbs < c.min_mbs())
        throw InvariantViolation("pool bounds");
    };
    try {
      const MetricsRecord r = run(spec, options);
      if (r.events < target) {
        ++violations;
        first = scheme.name() + ": only " + std::to_string(r.events) + " events";
      }
    } catch (const InvariantViolation& e) {
      ++violations;
      if (first.empty()) first = scheme.name() + ": " + e.what();
    }
    events += seen;
  }
  v.pass = violations == 0;
  v.detail = std::to_string(events) + " events checked, " + std::to_string(violations) +
             " violations" + (first.empty() ? "" : " (" + first + ")");
  return v;
}

std::string csv_in_process(LoadedConfig config, unsigned threads) {
  config.sweep.threads = threads;
  std::ostringstream os;
  run_sweep(config, os);
  return os.str();
}

Verdict determinism() {
  Verdict v;
  const std::string text =
      "sim.horizon_s = 20000\n"
      "sim.replications = 4\n"
      "sim.seed = 11\n"
      "sweep.lambda = 0.2, 0.5, 0.8\n";
  const LoadedConfig config = parse_config(text);
  const std::string a = csv_in_process(config, 1);
  const std::string b = csv_in_process(config, 1);
  const std::string c = csv_in_process(config, 4);
  v.pass = a == b && a == c;
  v.detail = std::string("sequential repeat ") + (a == b ? "identical" : "differs") +
             ", threads 1 vs 4 " + (a == c ? "identical" : "differs");

#ifdef MBS_SWEEP_PATH
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mbsadapt_acceptance";
  fs::create_directories(dir);
  std::ofstream(dir / "run.conf") << text;
  std::array<std::string, 2> outputs;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const fs::path out = dir / ("run" + std::to_string(i) + ".csv");
    const std::string cmd = std::string("\"") + MBS_SWEEP_PATH + "\" --config \"" +
                            (dir / "run.conf").string() + "\" --threads " +
                            (i == 0 ? "1" : "3") + " --out \"" + out.string() + "\"";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      v.pass = false;
      v.detail += ", CLI run failed";
    }
    std::ifstream in(out, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    outputs[i] = s.str();
  }
  fs::remove_all(dir);
  const bool cli_same = outputs[0] == outputs[1] && outputs[0] == a;
  v.pass = v.pass && cli_same;
  v.detail += std::string(", two CLI invocations ") + (cli_same ? "identical" : "differ");
#endif
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ":"
              << (v.detail.starts_with(" ") ? "" : " ") << v.detail << std::endl;
    if (!v.pass) ++failures;
  };
  auto guarded = [](auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Verdict{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "erlang-b equivalence", guarded(erlang_b_equivalence));
  report(2, "loss-network equivalence", guarded(loss_network_equivalence));

  DefaultSweep sweep;
  std::string sweep_error;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    sweep.config = parse_config("");
    sweep.rows = compute_sweep(sweep.config);
    sweep.seconds = seconds_since(t0);
    std::cout << "default sweep: " << sweep.rows.size() << " points x "
              << sweep.config.sweep.replications << " replications in " << num(sweep.seconds)
              << " s" << std::endl;
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  auto on_sweep = [&](auto&& fn) {
    if (!sweep_error.empty()) return Verdict{false, "sweep failed: " + sweep_error};
    return guarded([&] { return fn(sweep); });
  };
  report(3, "handover dropping ordering", on_sweep(drop_ordering));
  report(4, "forced termination ordering", on_sweep(forced_ordering));
  report(5, "utilization ordering", on_sweep(utilization_ordering));
  report(6, "allocation brute-force equivalence", guarded(allocation_equivalence));
  report(7, "invariant soak", guarded(invariant_soak));
  report(8, "determinism", guarded(determinism));
  report(9, "monotonicity in load", on_sweep(monotonicity));

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
