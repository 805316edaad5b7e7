#pragma once

// Queueing references for the non-adaptive special cases: Erlang-B, a dense
// CTMC solver, and multi-class loss networks.

#include <cstddef>
#include <span>
#include <vector>

namespace mbsadapt {

// Erlang-B blocking via B(0) = 1, B(k) = a B(k-1) / (k + a B(k-1)).
double erlang_b(int servers, double offered_load);

struct CtmcTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0.0;
};

struct CtmcSpec {
  std::size_t state_count = 0;
  std::vector<CtmcTransition> transitions;  // parallel edges add up
};

// Stationary distribution (pi Q = 0, sum pi = 1) by a dense LU solve.
// Throws NotIrreducible unless every state reaches and is reached from
// state 0 through positive rates.
std::vector<double> steady_state(const CtmcSpec& spec);

// Largest state space the loss-network routines will enumerate.
inline constexpr std::size_t kMaxLossStates = 1'000'000;

// Occupancy vectors n with sum_k n_k d_k <= capacity, in lexicographic order
// (last class varies fastest). Throws CapacityError past kMaxLossStates.
std::vector<std::vector<int>> loss_network_states(int capacity_units,
                                                  std::span<const int> demands);

// Birth-death CTMC of a complete-sharing loss network: class k arrives at
// rate loads[k] (unit mean holding time) and needs demands[k] units.
CtmcSpec loss_network_ctmc(int capacity_units, std::span<const int> demands,
                           std::span<const double> loads);

// Per-class blocking of a complete-sharing loss network, from the product-form
// stationary distribution pi(n) ~ prod_k a_k^n_k / n_k! over the enumerated
// feasible states. One class reduces to erlang_b(capacity / demand, load).
std::vector<double> loss_network_blocking(int capacity_units, std::span<const int> demands,
                                          std::span<const double> loads);

}  // namespace mbsadapt
