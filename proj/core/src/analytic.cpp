#include "mbsadapt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

#include "mbsadapt/errors.hpp"

namespace mbsadapt {
namespace {

void check_network(int capacity_units, std::span<const int> demands) {
  if (capacity_units < 0) throw std::invalid_argument("capacity must be >= 0");
  for (int d : demands)
    if (d <= 0) throw std::invalid_argument("class demands must be > 0");
}

std::vector<bool> reachable(const CtmcSpec& spec, bool forward) {
  std::vector<std::vector<std::size_t>> adj(spec.state_count);
  for (const auto& t : spec.transitions) {
    if (t.rate <= 0.0 || t.from == t.to) continue;
    if (forward)
      adj[t.from].push_back(t.to);
    else
      adj[t.to].push_back(t.from);
  }
  std::vector<bool> seen(spec.state_count, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t n : adj[s]) {
      if (!seen[n]) {
        seen[n] = true;
        stack.push_back(n);
      }
    }
  }
  return seen;
}

}  // namespace

double erlang_b(int servers, double offered_load) {
  if (servers < 0 || offered_load < 0.0)
    throw std::invalid_argument("erlang_b: servers and load must be non-negative");
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = offered_load * b / (k + offered_load * b);
  return b;
}

std::vector<double> steady_state(const CtmcSpec& spec) {
  const std::size_t n = spec.state_count;
  if (n == 0) throw NotIrreducible("empty state space");
  for (const auto& t : spec.transitions) {
    if (t.from >= n || t.to >= n) throw std::out_of_range("transition references unknown state");
    if (t.rate < 0.0) throw std::invalid_argument("transition rates must be non-negative");
  }
  const auto fwd = reachable(spec, true);
  const auto bwd = reachable(spec, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (!fwd[s] || !bwd[s]) throw NotIrreducible("CTMC is not irreducible");
  }
  if (n == 1) return {1.0};

  // Solve Q^T pi = 0 with the last balance equation replaced by sum pi = 1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (const auto& t : spec.transitions) {
    if (t.from == t.to) continue;
    const auto i = static_cast<Eigen::Index>(t.from);
    const auto j = static_cast<Eigen::Index>(t.to);
    a(j, i) += t.rate;
    a(i, i) -= t.rate;
  }
  const auto last = static_cast<Eigen::Index>(n - 1);
  a.row(last).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(last) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  return std::vector<double>(pi.data(), pi.data() + pi.size());
}

std::vector<std::vector<int>> loss_network_states(int capacity_units,
                                                  std::span<const int> demands) {
  check_network(capacity_units, demands);
  std::vector<std::vector<int>> states;
  std::vector<int> n(demands.size(), 0);
  // Depth-first over classes, filling the remaining capacity.
  auto rec = [&](auto&& self, std::size_t k, int remaining) -> void {
    if (k == demands.size()) {
      if (states.size() >= kMaxLossStates)
        throw CapacityError("loss network exceeds " + std::to_string(kMaxLossStates) + " states");
      states.push_back(n);
      return;
    }
    for (int c = 0; c * demands[k] <= remaining; ++c) {
      n[k] = c;
      self(self, k + 1, remaining - c * demands[k]);
    }
    n[k] = 0;
  };
  rec(rec, 0, capacity_units);
  return states;
}

CtmcSpec loss_network_ctmc(int capacity_units, std::span<const int> demands,
                           std::span<const double> loads) {
  if (loads.size() != demands.size())
    throw std::invalid_argument("one load per class is required");
  const auto states = loss_network_states(capacity_units, demands);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

  CtmcSpec spec;
  spec.state_count = states.size();
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = 0; k < demands.size(); ++k) {
      std::vector<int> up = states[i];
      ++up[k];
      if (auto it = index.find(up); it != index.end() && loads[k] > 0.0)
        spec.transitions.push_back({i, it->second, loads[k]});
      if (states[i][k] > 0) {
        std::vector<int> down = states[i];
        --down[k];
        spec.transitions.push_back({i, index.at(down), static_cast<double>(states[i][k])});
      }
    }
  }
  return spec;
}

std::vector<double> loss_network_blocking(int capacity_units, std::span<const int> demands,
                                          std::span<const double> loads) {
  if (loads.size() != demands.size())
    throw std::invalid_argument("one load per class is required");
  for (double a : loads)
    if (a < 0.0) throw std::invalid_argument("loads must be non-negative");
  const auto states = loss_network_states(capacity_units, demands);

  // log weights, normalised against the largest for stability.
  std::vector<double> logw(states.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = 0; k < demands.size(); ++k) {
      const int nk = states[i][k];
      if (nk == 0) continue;
      logw[i] += nk * std::log(loads[k]) - std::lgamma(nk + 1.0);
    }
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double norm = 0.0;
  std::vector<double> blocked(demands.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double w = std::exp(logw[i] - top);
    norm += w;
    int used = 0;
    for (std::size_t k = 0; k < demands.size(); ++k) used += states[i][k] * demands[k];
    for (std::size_t k = 0; k < demands.size(); ++k)
      if (capacity_units - used < demands[k]) blocked[k] += w;
  }
  for (double& b : blocked) b /= norm;
  return blocked;
}

}  // namespace mbsadapt
