#include "mbsadapt/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mbsadapt/allocation.hpp"
#include "mbsadapt/errors.hpp"

namespace mbsadapt {

std::ostream& operator<<(std::ostream& os, Bandwidth b) { return os << b.kbps() << " kbps"; }

TrafficClass TrafficClass::from_slot(std::size_t slot) {
  if (slot == 0) return voice();
  if (slot == 1) return unicast();
  return background(static_cast<int>(slot - 2));
}

std::size_t TrafficClass::slot() const {
  switch (kind) {
    case ServiceKind::kVoice:
      return 0;
    case ServiceKind::kUnicastVideo:
      return 1;
    case ServiceKind::kBackground:
      return 2 + static_cast<std::size_t>(background_index);
  }
  return 0;
}

std::string to_string(TrafficClass c) {
  switch (c.kind) {
    case ServiceKind::kVoice:
      return "voice";
    case ServiceKind::kUnicastVideo:
      return "unicast";
    case ServiceKind::kBackground:
      return "background" + std::to_string(c.background_index);
  }
  return "?";
}

std::string to_string(CallOrigin o) { return o == CallOrigin::kNew ? "new" : "handover"; }

LayerProfile::LayerProfile(Bandwidth base, std::vector<Bandwidth> enhanced, int min_layers)
    : base_(base), enhanced_(std::move(enhanced)), min_layers_(min_layers) {
  if (base_.is_zero()) throw ConfigError("layer profile: base layer must be > 0 kbps");
  for (Bandwidth b : enhanced_)
    if (b.is_zero()) throw ConfigError("layer profile: enhanced layers must be > 0 kbps");
  if (min_layers_ < 0 || min_layers_ > max_layers())
    throw ConfigError("layer profile: min_layers " + std::to_string(min_layers_) +
                      " outside [0, " + std::to_string(max_layers()) + "]");
}

Bandwidth LayerProfile::bandwidth(int layers) const {
  if (layers < min_layers_ || layers > max_layers()) {
    throw LayerRangeError("layer count " + std::to_string(layers) + " outside [" +
                          std::to_string(min_layers_) + ", " + std::to_string(max_layers()) +
                          "]");
  }
  Bandwidth sum = base_;
  for (int i = 0; i < layers; ++i) sum += enhanced_[static_cast<std::size_t>(i)];
  return sum;
}

Bandwidth session_bandwidth(const LayerProfile& profile, int layers) {
  return profile.bandwidth(layers);
}

Bandwidth unicast_bandwidth(const LayerProfile& profile, int layers) {
  return profile.bandwidth(layers);
}

Bandwidth background_min(const BackgroundClassProfile& profile) {
  const Fraction& xi = profile.degradation;
  if (xi.den <= 0 || xi.num < 0 || xi.num > xi.den) {
    throw ConfigError("background class " + std::to_string(profile.class_index) +
                      ": degradation fraction must lie in [0, 1]");
  }
  const std::int64_t scaled = profile.max_kbps.kbps() * (xi.den - xi.num);
  if (scaled % xi.den != 0) {
    throw ConfigError("background class " + std::to_string(profile.class_index) +
                      ": minimum bandwidth is not a whole number of kbps");
  }
  return Bandwidth(scaled / xi.den);
}

std::string Scheme::name() const {
  if (type == SchemeType::kProposed) return "proposed";
  return "fixed:" + std::to_string(fixed_reserve.kbps());
}

LayerProfile default_mbs_profile() {
  return LayerProfile(500_kbps, {125_kbps, 125_kbps, 125_kbps, 125_kbps}, 0);
}

LayerProfile default_unicast_profile() {
  return LayerProfile(300_kbps, {100_kbps, 100_kbps}, 0);
}

std::vector<MbsSessionSpec> default_mbs_sessions() {
  std::vector<MbsSessionSpec> sessions;
  for (int m = 1; m <= 12; ++m) sessions.push_back({m, default_mbs_profile()});
  return sessions;
}

Bandwidth SchemeConfig::max_mbs() const {
  Bandwidth sum;
  for (const auto& s : mbs_sessions) sum += s.profile.max_bandwidth();
  return sum;
}

Bandwidth SchemeConfig::min_mbs() const {
  Bandwidth sum;
  for (const auto& s : mbs_sessions) sum += s.profile.min_bandwidth();
  return sum;
}

Bandwidth SchemeConfig::min_non_mbs() const {
  return Bandwidth(std::max<std::int64_t>(0, capacity.kbps() - max_mbs().kbps()));
}

Bandwidth SchemeConfig::max_non_mbs() const { return capacity - min_mbs(); }

void SchemeConfig::validate() const {
  if (capacity.is_zero()) throw ConfigError("capacity_kbps: must be > 0");
  if (min_mbs() > capacity) {
    throw ConfigError("mbs: session floor " + std::to_string(min_mbs().kbps()) +
                      " kbps exceeds capacity " + std::to_string(capacity.kbps()) + " kbps");
  }
  std::vector<int> ranks;
  for (const auto& s : mbs_sessions) ranks.push_back(s.popularity_rank);
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] != static_cast<int>(i) + 1)
      throw ConfigError("mbs.popularity: ranks must be a permutation of 1..M");
  }
  if (voice.is_zero()) throw ConfigError("voice_kbps: must be > 0");
  for (std::size_t i = 0; i < background.size(); ++i) {
    if (background[i].class_index != static_cast<int>(i))
      throw ConfigError("background: class indices must be 0..n-1 in order");
    if (background[i].max_kbps.is_zero())
      throw ConfigError("background.max_kbps: must be > 0");
    background_min(background[i]);
  }
  if (scheme.type == SchemeType::kFixedMbs) {
    if (scheme.fixed_reserve < min_mbs() || scheme.fixed_reserve > capacity) {
      throw ConfigError("scheme " + scheme.name() + ": reserve must lie in [" +
                        std::to_string(min_mbs().kbps()) + ", " +
                        std::to_string(capacity.kbps()) + "] kbps");
    }
  }
}

Request make_request(const SchemeConfig& config, TrafficClass c, CallOrigin origin) {
  Request r;
  r.traffic_class = c;
  r.origin = origin;
  switch (c.kind) {
    case ServiceKind::kVoice:
      r.req_max = r.req_min = config.voice;
      break;
    case ServiceKind::kUnicastVideo:
      r.req_max = config.unicast.max_bandwidth();
      r.req_min = config.unicast.min_bandwidth();
      break;
    case ServiceKind::kBackground: {
      const auto& profile = config.background.at(static_cast<std::size_t>(c.background_index));
      r.req_max = profile.max_kbps;
      r.req_min = background_min(profile);
      break;
    }
  }
  return r;
}

CellState::CellState(SchemeConfig config) : config_(std::move(config)) {
  config_.validate();
  int id = 1;
  for (const auto& spec : config_.mbs_sessions) {
    sessions_.push_back({id++, spec.popularity_rank, spec.profile, spec.profile.max_layers()});
  }
  Bandwidth budget = std::min(config_.max_mbs(), config_.capacity);
  if (config_.scheme.type == SchemeType::kFixedMbs)
    budget = std::min(budget, config_.scheme.fixed_reserve);
  const auto plan = plan_mbs_allocation(sessions_, budget);
  for (std::size_t i = 0; i < sessions_.size(); ++i) sessions_[i].active_layers = plan.layers[i];
  mbs_total_ = plan.total;
}

const CallState& CellState::call(CallId id) const {
  auto it = calls_.find(id);
  if (it == calls_.end()) throw NotFoundError("no call with id " + std::to_string(id));
  return it->second;
}

Bandwidth CellState::idle_reserve() const {
  if (config_.scheme.type != SchemeType::kFixedMbs) return {};
  return config_.scheme.fixed_reserve - mbs_total_;
}

Bandwidth CellState::free() const {
  return config_.capacity - mbs_total_ - idle_reserve() - non_mbs_total_;
}

CallId CellState::insert_call(CallState call) {
  call.call_id = next_call_id_++;
  non_mbs_total_ += call.allocated;
  auto [it, inserted] = calls_.emplace(call.call_id, std::move(call));
  reindex(it->second);
  return it->first;
}

CallState CellState::erase_call(CallId id) {
  auto it = calls_.find(id);
  if (it == calls_.end()) throw NotFoundError("no call with id " + std::to_string(id));
  CallState call = std::move(it->second);
  calls_.erase(it);
  non_mbs_total_ -= call.allocated;
  unicast_ids_.erase(id);
  background_ids_.erase(id);
  degraded_unicast_.erase(id);
  degraded_background_.erase(id);
  return call;
}

void CellState::set_call_allocation(CallId id, Bandwidth allocated, int layers) {
  auto it = calls_.find(id);
  if (it == calls_.end()) throw NotFoundError("no call with id " + std::to_string(id));
  non_mbs_total_ = non_mbs_total_ - it->second.allocated + allocated;
  it->second.allocated = allocated;
  it->second.active_layers = layers;
  reindex(it->second);
}

void CellState::set_session_layers(std::size_t index, int layers) {
  auto& s = sessions_.at(index);
  mbs_total_ = mbs_total_ - s.bandwidth() + s.profile.bandwidth(layers);
  s.active_layers = layers;
}

void CellState::reindex(const CallState& call) {
  const bool degraded = call.allocated < call.max_kbps;
  switch (call.traffic_class.kind) {
    case ServiceKind::kVoice:
      break;
    case ServiceKind::kUnicastVideo:
      unicast_ids_.insert(call.call_id);
      if (degraded)
        degraded_unicast_.insert(call.call_id);
      else
        degraded_unicast_.erase(call.call_id);
      break;
    case ServiceKind::kBackground:
      background_ids_.insert(call.call_id);
      if (degraded)
        degraded_background_.insert(call.call_id);
      else
        degraded_background_.erase(call.call_id);
      break;
  }
}

PoolSnapshot snapshot_pools(const CellState& state) {
  return {state.mbs_total(), state.non_mbs_total(), state.free(), state.idle_reserve()};
}

}  // namespace mbsadapt
