#pragma once

// Domain types shared by the allocator, admission control and the simulator.
// All bandwidth accounting is exact integer kbps.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbsadapt {

class Bandwidth {
 public:
  constexpr Bandwidth() = default;
  constexpr explicit Bandwidth(std::int64_t kbps) : kbps_(kbps) {
    if (kbps < 0) throw std::domain_error("bandwidth must be non-negative");
  }

  constexpr std::int64_t kbps() const { return kbps_; }
  constexpr bool is_zero() const { return kbps_ == 0; }

  friend constexpr auto operator<=>(Bandwidth, Bandwidth) = default;

  friend constexpr Bandwidth operator+(Bandwidth a, Bandwidth b) {
    return Bandwidth(a.kbps_ + b.kbps_);
  }
  // Throws std::domain_error when b > a.
  friend constexpr Bandwidth operator-(Bandwidth a, Bandwidth b) {
    return Bandwidth(a.kbps_ - b.kbps_);
  }
  friend constexpr Bandwidth operator*(Bandwidth a, std::int64_t n) {
    return Bandwidth(a.kbps_ * n);
  }
  constexpr Bandwidth& operator+=(Bandwidth b) { return *this = *this + b; }
  constexpr Bandwidth& operator-=(Bandwidth b) { return *this = *this - b; }

 private:
  std::int64_t kbps_ = 0;
};

constexpr Bandwidth operator""_kbps(unsigned long long v) {
  return Bandwidth(static_cast<std::int64_t>(v));
}
constexpr Bandwidth operator""_mbps(unsigned long long v) {
  return Bandwidth(static_cast<std::int64_t>(v) * 1000);
}

std::ostream& operator<<(std::ostream& os, Bandwidth b);

// Exact rational in [0, 1] used for background degradation levels.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

enum class ServiceKind : std::uint8_t { kVoice, kUnicastVideo, kBackground };

// Non-MBS traffic class. Classes are also addressed by a dense "slot":
// 0 = voice, 1 = unicast video, 2 + i = background class i.
struct TrafficClass {
  ServiceKind kind = ServiceKind::kVoice;
  int background_index = 0;

  static constexpr TrafficClass voice() { return {ServiceKind::kVoice, 0}; }
  static constexpr TrafficClass unicast() { return {ServiceKind::kUnicastVideo, 0}; }
  static constexpr TrafficClass background(int index) {
    return {ServiceKind::kBackground, index};
  }
  static TrafficClass from_slot(std::size_t slot);

  std::size_t slot() const;

  friend bool operator==(const TrafficClass&, const TrafficClass&) = default;
};

std::string to_string(TrafficClass c);

enum class CallOrigin : std::uint8_t { kNew, kHandover };

std::string to_string(CallOrigin o);

// Layered bandwidth ladder: a base layer plus ordered enhanced layers. The
// minimum quality keeps `min_layers` enhanced layers, the maximum keeps all.
class LayerProfile {
 public:
  // Throws ConfigError on a non-positive base or layer, or min_layers outside
  // [0, enhanced.size()].
  LayerProfile(Bandwidth base, std::vector<Bandwidth> enhanced, int min_layers);

  Bandwidth base() const { return base_; }
  std::span<const Bandwidth> enhanced() const { return enhanced_; }
  int min_layers() const { return min_layers_; }
  int max_layers() const { return static_cast<int>(enhanced_.size()); }

  // Cost of the n-th enhanced layer, 1-based.
  Bandwidth layer(int n) const { return enhanced_.at(static_cast<std::size_t>(n - 1)); }

  // base + first `layers` enhanced layers. Throws LayerRangeError outside
  // [min_layers, max_layers].
  Bandwidth bandwidth(int layers) const;
  Bandwidth min_bandwidth() const { return bandwidth(min_layers_); }
  Bandwidth max_bandwidth() const { return bandwidth(max_layers()); }

  friend bool operator==(const LayerProfile&, const LayerProfile&) = default;

 private:
  Bandwidth base_;
  std::vector<Bandwidth> enhanced_;
  int min_layers_ = 0;
};

Bandwidth session_bandwidth(const LayerProfile& profile, int layers);
Bandwidth unicast_bandwidth(const LayerProfile& profile, int layers);

struct BackgroundClassProfile {
  int class_index = 0;
  Bandwidth max_kbps;
  Fraction degradation;  // share of max_kbps that may be withheld

  friend bool operator==(const BackgroundClassProfile&,
                         const BackgroundClassProfile&) = default;
};

// (1 - degradation) * max_kbps. Throws ConfigError when the fraction is not in
// [0, 1] or the result is not a whole number of kbps.
Bandwidth background_min(const BackgroundClassProfile& profile);

struct MbsSessionState {
  int session_id = 0;
  int popularity_rank = 0;  // 1 = most popular
  LayerProfile profile;
  int active_layers = 0;

  Bandwidth bandwidth() const { return profile.bandwidth(active_layers); }
};

using CallId = std::uint64_t;

struct CallState {
  CallId call_id = 0;
  TrafficClass traffic_class;
  CallOrigin origin = CallOrigin::kNew;
  Bandwidth allocated;
  Bandwidth min_kbps;
  Bandwidth max_kbps;
  int active_layers = 0;  // unicast only
  double admit_time = 0.0;
  double residual_duration = 0.0;  // remaining holding time at admission
  double dwell_deadline = 0.0;     // absolute time the mobile leaves the cell
};

struct Request {
  TrafficClass traffic_class;
  CallOrigin origin = CallOrigin::kNew;
  Bandwidth req_max;
  Bandwidth req_min;
  std::optional<CallState> carried_state;  // set for wrap-around handovers
};

enum class SchemeType : std::uint8_t { kProposed, kFixedMbs };

struct Scheme {
  SchemeType type = SchemeType::kProposed;
  Bandwidth fixed_reserve;  // FixedMbs only

  static Scheme proposed() { return {}; }
  static Scheme fixed_mbs(Bandwidth reserve) { return {SchemeType::kFixedMbs, reserve}; }

  bool adaptive() const { return type == SchemeType::kProposed; }
  // "proposed" or "fixed:<kbps>".
  std::string name() const;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

struct MbsSessionSpec {
  int popularity_rank = 1;
  LayerProfile profile;

  friend bool operator==(const MbsSessionSpec&, const MbsSessionSpec&) = default;
};

LayerProfile default_mbs_profile();
LayerProfile default_unicast_profile();
std::vector<MbsSessionSpec> default_mbs_sessions();

// Allocation parameters of one cell. Default-constructed values are the
// 20 Mbps / 12-session reference cell.
struct SchemeConfig {
  Scheme scheme;
  Bandwidth capacity = 20_mbps;
  std::vector<MbsSessionSpec> mbs_sessions = default_mbs_sessions();
  Bandwidth voice = 64_kbps;
  LayerProfile unicast = default_unicast_profile();
  std::vector<BackgroundClassProfile> background = {
      {0, 120_kbps, Fraction{1, 2}}};

  Bandwidth max_mbs() const;      // sum of session maxima
  Bandwidth min_mbs() const;      // sum of session minima
  Bandwidth min_non_mbs() const;  // capacity - max_mbs
  Bandwidth max_non_mbs() const;  // capacity - min_mbs

  std::size_t class_count() const { return 2 + background.size(); }

  // Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

// Request bounds for a class: C_req,max is the class maximum and C_req,min
// its minimum (equal for voice).
Request make_request(const SchemeConfig& config, TrafficClass c, CallOrigin origin);

// Bandwidth split of a cell. mbs + non_mbs + free + idle_reserve == capacity.
// idle_reserve is FixedMbs reserve beyond what the sessions can use.
struct PoolSnapshot {
  Bandwidth mbs;
  Bandwidth non_mbs;
  Bandwidth free;
  Bandwidth idle_reserve;
};

// Full allocation picture of one cell. Mutated only through admit()/release();
// the index sets are maintained alongside the call map.
class CellState {
 public:
  explicit CellState(SchemeConfig config);

  const SchemeConfig& config() const { return config_; }
  std::span<const MbsSessionState> sessions() const { return sessions_; }
  const std::map<CallId, CallState>& calls() const { return calls_; }
  const CallState& call(CallId id) const;

  double clock() const { return clock_; }
  void set_clock(double t) { clock_ = t; }

  Bandwidth mbs_total() const { return mbs_total_; }
  Bandwidth non_mbs_total() const { return non_mbs_total_; }
  // Bandwidth withheld from non-MBS traffic beyond what the sessions carry.
  Bandwidth idle_reserve() const;
  // Bandwidth usable by a new non-MBS allocation without reclaiming anything.
  Bandwidth free() const;

  const std::set<CallId>& unicast_calls() const { return unicast_ids_; }
  const std::set<CallId>& background_calls() const { return background_ids_; }
  const std::set<CallId>& degraded_unicast() const { return degraded_unicast_; }
  const std::set<CallId>& degraded_background() const { return degraded_background_; }

  // Low-level mutators; callers keep the cell invariants.
  CallId insert_call(CallState call);
  CallState erase_call(CallId id);
  void set_call_allocation(CallId id, Bandwidth allocated, int layers);
  void set_session_layers(std::size_t index, int layers);

 private:
  void reindex(const CallState& call);

  SchemeConfig config_;
  std::vector<MbsSessionState> sessions_;
  std::map<CallId, CallState> calls_;
  std::set<CallId> unicast_ids_;
  std::set<CallId> background_ids_;
  std::set<CallId> degraded_unicast_;
  std::set<CallId> degraded_background_;
  Bandwidth mbs_total_;
  Bandwidth non_mbs_total_;
  double clock_ = 0.0;
  CallId next_call_id_ = 1;
};

PoolSnapshot snapshot_pools(const CellState& state);

}  // namespace mbsadapt
