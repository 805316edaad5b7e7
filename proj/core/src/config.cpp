#include "mbsadapt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mbsadapt/errors.hpp"

#ifndef MBSADAPT_VERSION
#define MBSADAPT_VERSION "0.0.0"
#endif

namespace mbsadapt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

[[noreturn]] void bad(std::string_view key, const std::string& what) {
  throw ConfigError(std::string(key) + ": " + what);
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    bad(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

Bandwidth parse_kbps(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty() || v < 0)
    bad(key, "expected a whole non-negative number of kbps, got '" + std::string(text) + "'");
  return Bandwidth(v);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(v))
    bad(key, "expected a number, got '" + std::string(text) + "'");
  return v;
}

// "1/2" or a decimal such as "0.5"; kept exact.
Fraction parse_fraction(std::string_view key, std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    Fraction f{parse_int(key, trim(text.substr(0, slash))),
               parse_int(key, trim(text.substr(slash + 1)))};
    if (f.den <= 0) bad(key, "denominator must be positive");
    return f;
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return {parse_int(key, text), 1};
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 12) bad(key, "unsupported decimal '" + std::string(text) + "'");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t w = whole.empty() ? 0 : parse_int(key, whole);
  if (w < 0 || frac.front() == '-' || frac.front() == '+') bad(key, "fraction must be non-negative");
  return {w * den + parse_int(key, frac), den};
}

std::vector<Bandwidth> parse_kbps_list(std::string_view key, std::string_view text) {
  std::vector<Bandwidth> out;
  if (trim(text).empty()) return out;
  for (auto part : split(text, ',')) out.push_back(parse_kbps(key, part));
  return out;
}

std::string join_kbps(std::span<const Bandwidth> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(xs[i].kbps());
  }
  return s;
}

std::string format_fraction(const Fraction& f) {
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

std::string format_profile(const LayerProfile& p) {
  return std::to_string(p.base().kbps()) + " | " + join_kbps(p.enhanced()) + " | " +
         std::to_string(p.min_layers());
}

// "base | l1, l2, ... | min_layers"
LayerProfile parse_profile(std::string_view key, std::string_view text) {
  const auto parts = split(text, '|');
  if (parts.size() != 3) bad(key, "expected 'base | layer, ... | min_layers'");
  try {
    return LayerProfile(parse_kbps(key, parts[0]), parse_kbps_list(key, parts[1]),
                        static_cast<int>(parse_int(key, parts[2])));
  } catch (const ConfigError& e) {
    bad(key, e.what());
  }
}

const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys = {
      "scheme",
      "capacity_kbps",
      "voice_kbps",
      "mbs.count",
      "mbs.base_kbps",
      "mbs.layer_kbps",
      "mbs.min_layers",
      "mbs.popularity",
      "unicast.base_kbps",
      "unicast.layer_kbps",
      "unicast.min_layers",
      "background.max_kbps",
      "background.degradation",
      "arrival.total_rate",
      "arrival.ratio",
      "duration.voice_s",
      "duration.unicast_s",
      "duration.background_s",
      "dwell_s",
      "sim.horizon_s",
      "sim.warmup_s",
      "sim.replications",
      "sim.seed",
      "sim.threads",
      "sweep.lambda",
      "sweep.schemes",
  };
  return keys;
}

bool is_profile_key(std::string_view key) { return key.starts_with("mbs.profile."); }

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = trim(line.substr(0, hash));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const auto& keys = known_keys();
      if (std::find(keys.begin(), keys.end(), key) == keys.end() && !is_profile_key(key))
        bad(key, "unknown key");
      if (!values_.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
        bad(key, "given more than once");
    }
  }

  std::optional<std::string_view> get(std::string_view key) const {
    auto it = values_.find(std::string(key));
    if (it == values_.end()) return std::nullopt;
    return std::string_view(it->second);
  }

  std::vector<std::pair<std::string, std::string>> with_prefix(std::string_view prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : values_)
      if (std::string_view(k).starts_with(prefix)) out.emplace_back(k, v);
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

bool homogeneous_sessions(const SchemeConfig& cell) {
  return std::all_of(cell.mbs_sessions.begin(), cell.mbs_sessions.end(),
                     [&](const MbsSessionSpec& s) {
                       return s.profile == cell.mbs_sessions.front().profile;
                     });
}

}  // namespace

const char* version() { return MBSADAPT_VERSION; }

std::vector<double> default_lambda_values() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}; }

void SweepSpec::validate() const {
  if (lambda_values.empty()) throw ConfigError("sweep.lambda: at least one value required");
  for (std::size_t i = 0; i < lambda_values.size(); ++i) {
    if (!(lambda_values[i] > 0.0) || !std::isfinite(lambda_values[i]))
      throw ConfigError("sweep.lambda: arrival rates must be > 0");
    if (i > 0 && !(lambda_values[i] > lambda_values[i - 1]))
      throw ConfigError("sweep.lambda: values must be strictly increasing");
  }
  if (schemes.empty()) throw ConfigError("sweep.schemes: at least one scheme required");
  if (replications < 1) throw ConfigError("sim.replications: must be >= 1");
  if (!(horizon_s > 0.0)) throw ConfigError("sim.horizon_s: must be > 0");
  if (!(warmup_s >= 0.0) || !(warmup_s < horizon_s))
    throw ConfigError("sim.warmup_s: must lie in [0, horizon)");
}

Scheme parse_scheme(std::string_view text) {
  text = trim(text);
  if (text == "proposed") return Scheme::proposed();
  if (text.starts_with("fixed:"))
    return Scheme::fixed_mbs(parse_kbps("scheme", trim(text.substr(6))));
  throw ConfigError("scheme: expected 'proposed' or 'fixed:<kbps>', got '" + std::string(text) +
                    "'");
}

std::vector<double> parse_lambda_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double("sweep.lambda", part));
  return out;
}

LoadedConfig parse_config(std::string_view text) {
  const Reader in(text);
  LoadedConfig out;
  SchemeConfig& cell = out.cell;
  TrafficRates& rates = out.rates;
  SweepSpec& sweep = out.sweep;

  if (auto v = in.get("scheme")) cell.scheme = parse_scheme(*v);
  if (auto v = in.get("capacity_kbps")) cell.capacity = parse_kbps("capacity_kbps", *v);
  if (auto v = in.get("voice_kbps")) cell.voice = parse_kbps("voice_kbps", *v);

  // MBS sessions share one profile unless overridden per session.
  {
    const LayerProfile def = default_mbs_profile();
    Bandwidth base = def.base();
    std::vector<Bandwidth> layers(def.enhanced().begin(), def.enhanced().end());
    int min_layers = def.min_layers();
    if (auto v = in.get("mbs.base_kbps")) base = parse_kbps("mbs.base_kbps", *v);
    if (auto v = in.get("mbs.layer_kbps")) layers = parse_kbps_list("mbs.layer_kbps", *v);
    if (auto v = in.get("mbs.min_layers"))
      min_layers = static_cast<int>(parse_int("mbs.min_layers", *v));
    std::optional<LayerProfile> profile;
    try {
      profile.emplace(base, layers, min_layers);
    } catch (const ConfigError& e) {
      bad("mbs", e.what());
    }

    std::int64_t count = 12;
    if (auto v = in.get("mbs.count")) count = parse_int("mbs.count", *v);
    if (count < 0 || count > 10'000) bad("mbs.count", "must lie in [0, 10000]");
    std::vector<int> ranks;
    if (auto v = in.get("mbs.popularity"); v && !v->empty()) {
      for (auto part : split(*v, ','))
        ranks.push_back(static_cast<int>(parse_int("mbs.popularity", part)));
      if (static_cast<std::int64_t>(ranks.size()) != count)
        bad("mbs.popularity", "expected " + std::to_string(count) + " ranks");
    } else {
      for (int m = 1; m <= count; ++m) ranks.push_back(m);
    }
    cell.mbs_sessions.clear();
    for (int r : ranks) cell.mbs_sessions.push_back({r, *profile});
    for (const auto& [key, value] : in.with_prefix("mbs.profile.")) {
      const std::int64_t m = parse_int(key, std::string_view(key).substr(12));
      if (m < 1 || m > count) bad(key, "session index out of range");
      cell.mbs_sessions[static_cast<std::size_t>(m - 1)].profile = parse_profile(key, value);
    }
  }

  {
    const LayerProfile def = default_unicast_profile();
    Bandwidth base = def.base();
    std::vector<Bandwidth> layers(def.enhanced().begin(), def.enhanced().end());
    int min_layers = def.min_layers();
    if (auto v = in.get("unicast.base_kbps")) base = parse_kbps("unicast.base_kbps", *v);
    if (auto v = in.get("unicast.layer_kbps")) layers = parse_kbps_list("unicast.layer_kbps", *v);
    if (auto v = in.get("unicast.min_layers"))
      min_layers = static_cast<int>(parse_int("unicast.min_layers", *v));
    try {
      cell.unicast = LayerProfile(base, layers, min_layers);
    } catch (const ConfigError& e) {
      bad("unicast", e.what());
    }
  }

  {
    std::vector<Bandwidth> max_kbps = {120_kbps};
    if (auto v = in.get("background.max_kbps"))
      max_kbps = parse_kbps_list("background.max_kbps", *v);
    std::vector<Fraction> xi(max_kbps.size(), Fraction{1, 2});
    if (auto v = in.get("background.degradation")) {
      xi.clear();
      if (!trim(*v).empty())
        for (auto part : split(*v, ','))
          xi.push_back(parse_fraction("background.degradation", part));
      if (xi.size() != max_kbps.size())
        bad("background.degradation", "expected one value per background class");
    }
    cell.background.clear();
    for (std::size_t i = 0; i < max_kbps.size(); ++i) {
      cell.background.push_back({static_cast<int>(i), max_kbps[i], xi[i]});
      try {
        background_min(cell.background.back());
      } catch (const ConfigError& e) {
        bad("background.degradation", e.what());
      }
    }
  }

  const std::size_t classes = cell.class_count();
  const std::size_t backgrounds = cell.background.size();
  if (auto v = in.get("arrival.total_rate"))
    rates.total_new_rate = parse_double("arrival.total_rate", *v);
  else
    rates.total_new_rate = 0.1;
  if (auto v = in.get("arrival.ratio")) {
    rates.class_weights.clear();
    for (auto part : split(*v, ':')) rates.class_weights.push_back(parse_int("arrival.ratio", part));
  } else if (backgrounds != 1) {
    bad("arrival.ratio", "required when there is not exactly one background class");
  }
  rates.mean_duration_s = {120.0, 300.0};
  if (auto v = in.get("duration.voice_s")) rates.mean_duration_s[0] = parse_double("duration.voice_s", *v);
  if (auto v = in.get("duration.unicast_s"))
    rates.mean_duration_s[1] = parse_double("duration.unicast_s", *v);
  std::vector<double> bg_durations(backgrounds, 180.0);
  if (auto v = in.get("duration.background_s")) {
    std::vector<double> given;
    for (auto part : split(*v, ',')) given.push_back(parse_double("duration.background_s", part));
    if (given.size() == 1)
      bg_durations.assign(backgrounds, given.front());
    else if (given.size() == backgrounds)
      bg_durations = given;
    else
      bad("duration.background_s", "expected one value or one per background class");
  }
  rates.mean_duration_s.insert(rates.mean_duration_s.end(), bg_durations.begin(),
                               bg_durations.end());
  if (auto v = in.get("dwell_s")) rates.mean_dwell_s = parse_double("dwell_s", *v);

  if (auto v = in.get("sim.horizon_s")) {
    sweep.horizon_s = parse_double("sim.horizon_s", *v);
    sweep.warmup_s = 0.1 * sweep.horizon_s;
  }
  if (auto v = in.get("sim.warmup_s")) sweep.warmup_s = parse_double("sim.warmup_s", *v);
  if (auto v = in.get("sim.replications")) {
    const auto n = parse_int("sim.replications", *v);
    if (n < 1 || n > 100'000) bad("sim.replications", "must lie in [1, 100000]");
    sweep.replications = static_cast<int>(n);
  }
  if (auto v = in.get("sim.seed")) {
    const auto s = parse_int("sim.seed", *v);
    if (s < 0) bad("sim.seed", "must be non-negative");
    sweep.seed_base = static_cast<std::uint64_t>(s);
  }
  if (auto v = in.get("sim.threads")) {
    const auto t = parse_int("sim.threads", *v);
    if (t < 0 || t > 1024) bad("sim.threads", "must lie in [0, 1024]");
    sweep.threads = static_cast<unsigned>(t);
  }
  if (auto v = in.get("sweep.lambda")) sweep.lambda_values = parse_lambda_list(*v);
  if (auto v = in.get("sweep.schemes")) {
    sweep.schemes.clear();
    for (auto part : split(*v, ',')) sweep.schemes.push_back(parse_scheme(part));
  }

  cell.validate();
  for (const Scheme& s : sweep.schemes) {
    SchemeConfig probe = cell;
    probe.scheme = s;
    probe.validate();
  }
  rates.validate(classes);
  sweep.validate();
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_number(double value) {
  char buf[64];
  // Whole numbers print without an exponent ("200000", not "2e+05").
  const bool whole = std::isfinite(value) && std::abs(value) < 1e15 && value == std::trunc(value);
  auto [ptr, ec] = whole ? std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string to_config_text(const SchemeConfig& cell, const TrafficRates& rates) {
  std::ostringstream os;
  os << "scheme = " << cell.scheme.name() << "\n";
  os << "capacity_kbps = " << cell.capacity.kbps() << "\n";
  os << "voice_kbps = " << cell.voice.kbps() << "\n";
  os << "mbs.count = " << cell.mbs_sessions.size() << "\n";
  const LayerProfile mbs_profile =
      cell.mbs_sessions.empty() ? default_mbs_profile() : cell.mbs_sessions.front().profile;
  os << "mbs.base_kbps = " << mbs_profile.base().kbps() << "\n";
  os << "mbs.layer_kbps = " << join_kbps(mbs_profile.enhanced()) << "\n";
  os << "mbs.min_layers = " << mbs_profile.min_layers() << "\n";
  os << "mbs.popularity = ";
  for (std::size_t i = 0; i < cell.mbs_sessions.size(); ++i)
    os << (i ? ", " : "") << cell.mbs_sessions[i].popularity_rank;
  os << "\n";
  if (!homogeneous_sessions(cell)) {
    for (std::size_t i = 0; i < cell.mbs_sessions.size(); ++i)
      os << "mbs.profile." << (i + 1) << " = " << format_profile(cell.mbs_sessions[i].profile)
         << "\n";
  }
  os << "unicast.base_kbps = " << cell.unicast.base().kbps() << "\n";
  os << "unicast.layer_kbps = " << join_kbps(cell.unicast.enhanced()) << "\n";
  os << "unicast.min_layers = " << cell.unicast.min_layers() << "\n";
  os << "background.max_kbps = ";
  for (std::size_t i = 0; i < cell.background.size(); ++i)
    os << (i ? ", " : "") << cell.background[i].max_kbps.kbps();
  os << "\nbackground.degradation = ";
  for (std::size_t i = 0; i < cell.background.size(); ++i)
    os << (i ? ", " : "") << format_fraction(cell.background[i].degradation);
  os << "\narrival.total_rate = " << format_number(rates.total_new_rate) << "\n";
  os << "arrival.ratio = ";
  for (std::size_t i = 0; i < rates.class_weights.size(); ++i)
    os << (i ? ":" : "") << rates.class_weights[i];
  os << "\n";
  if (rates.mean_duration_s.size() >= 2) {
    os << "duration.voice_s = " << format_number(rates.mean_duration_s[0]) << "\n";
    os << "duration.unicast_s = " << format_number(rates.mean_duration_s[1]) << "\n";
    os << "duration.background_s = ";
    for (std::size_t i = 2; i < rates.mean_duration_s.size(); ++i)
      os << (i > 2 ? ", " : "") << format_number(rates.mean_duration_s[i]);
    os << "\n";
  }
  os << "dwell_s = " << format_number(rates.mean_dwell_s) << "\n";
  return os.str();
}

std::string to_config_text(const LoadedConfig& config) {
  std::ostringstream os;
  os << to_config_text(config.cell, config.rates);
  const SweepSpec& s = config.sweep;
  os << "sim.horizon_s = " << format_number(s.horizon_s) << "\n";
  os << "sim.warmup_s = " << format_number(s.warmup_s) << "\n";
  os << "sim.replications = " << s.replications << "\n";
  os << "sim.seed = " << s.seed_base << "\n";
  os << "sweep.lambda = ";
  for (std::size_t i = 0; i < s.lambda_values.size(); ++i)
    os << (i ? ", " : "") << format_number(s.lambda_values[i]);
  os << "\nsweep.schemes = ";
  for (std::size_t i = 0; i < s.schemes.size(); ++i) os << (i ? ", " : "") << s.schemes[i].name();
  os << "\n";
  return os.str();
}

}  // namespace mbsadapt
