#include "gfrsim/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gfrsim/errors.hpp"

namespace gfrsim {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError(std::string(key) + " = '" + std::string(value) + "': " + std::string(why));
}

template <typename T>
T parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad(key, text, "expected an integer");
  return v;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    bad(key, text, "expected a number");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(key, text, "expected true or false");
}

// Comma-separated items; "v*n" repeats v n times.
std::vector<std::string> expand_list(std::string_view key, std::string_view text) {
  std::vector<std::string> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = std::min(s.find(',', pos), s.size());
    const std::string item = trim(std::string_view(s).substr(pos, comma - pos));
    if (item.empty()) bad(key, text, "empty list item");
    const auto star = item.find('*');
    if (star == std::string::npos) {
      out.push_back(item);
    } else {
      const auto n = parse_int<std::uint32_t>(key, item.substr(star + 1));
      if (n == 0) bad(key, text, "repeat count must be positive");
      out.insert(out.end(), n, trim(item.substr(0, star)));
    }
    pos = comma + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  // Shortest text that round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream t;
    t.precision(p);
    t << v;
    if (std::stod(t.str()) == v) return t.str();
  }
  return os.str();
}

// Joins with run-length compression so presets stay readable.
template <typename T, typename Fmt>
std::string fmt_list(const std::vector<T>& v, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (!out.empty()) out += ", ";
    out += fmt(v[i]);
    if (j - i > 1) out += "*" + std::to_string(j - i);
    i = j;
  }
  return out;
}

struct Field {
  std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field uint_field(T ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, std::string_view k, std::string_view v) {
            c.*m = parse_int<T>(k, v);
          },
          [m](const ScenarioConfig& c) { return std::to_string(c.*m); }};
}

Field double_field(double ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, std::string_view k, std::string_view v) {
            c.*m = parse_double(k, v);
          },
          [m](const ScenarioConfig& c) { return fmt_double(c.*m); }};
}

Field bool_field(bool ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, std::string_view k, std::string_view v) {
            c.*m = parse_bool(k, v);
          },
          [m](const ScenarioConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field time_field(SimTime ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, std::string_view k, std::string_view v) {
            try {
              c.*m = parse_duration(v);
            } catch (const ConfigError& e) {
              bad(k, v, e.what());
            }
          },
          [m](const ScenarioConfig& c) { return format_duration(c.*m); }};
}

template <typename E>
Field enum_field(E ScenarioConfig::*m, std::vector<E> values) {
  return {[m, values](ScenarioConfig& c, std::string_view k, std::string_view v) {
            const std::string s = trim(v);
            for (E e : values) {
              if (to_string(e) == s) {
                c.*m = e;
                return;
              }
            }
            bad(k, v, "unknown value");
          },
          [m](const ScenarioConfig& c) { return to_string(c.*m); }};
}

// Ordered so to_ini output is stable.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("scenario.name",
                   Field{[](ScenarioConfig& c, std::string_view, std::string_view v) {
                           c.name = trim(v);
                         },
                         [](const ScenarioConfig& c) { return c.name; }});
    t.emplace_back("scenario.topology",
                   enum_field(&ScenarioConfig::topology,
                              {TopologyKind::n_source, TopologyKind::vc_merge}));
    t.emplace_back("scenario.n_tcp", uint_field(&ScenarioConfig::n_tcp));
    t.emplace_back("scenario.tcps_per_vc", uint_field(&ScenarioConfig::tcps_per_vc));
    t.emplace_back("scenario.group_size", uint_field(&ScenarioConfig::group_size));

    t.emplace_back("buffer.policy",
                   enum_field(&ScenarioConfig::policy,
                              {PolicyKind::off, PolicyKind::threshold, PolicyKind::gfr}));
    t.emplace_back("buffer.threshold_basis",
                   enum_field(&ScenarioConfig::threshold_basis,
                              {ThresholdBasis::occupancy, ThresholdBasis::cwnd}));
    t.emplace_back(
        "buffer.thresholds",
        Field{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                c.thresholds.clear();
                for (const auto& item : expand_list(k, v)) {
                  c.thresholds.push_back(parse_int<std::uint64_t>(k, item));
                }
              },
              [](const ScenarioConfig& c) {
                return fmt_list(c.thresholds, [](std::uint64_t x) { return std::to_string(x); });
              }});
    t.emplace_back("buffer.mcr",
                   Field{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                           c.mcr.clear();
                           for (const auto& item : expand_list(k, v)) {
                             c.mcr.push_back(parse_double(k, item));
                           }
                         },
                         [](const ScenarioConfig& c) { return fmt_list(c.mcr, fmt_double); }});
    t.emplace_back("buffer.mcr_threshold_total", uint_field(&ScenarioConfig::mcr_threshold_total));
    t.emplace_back("buffer.capacity", uint_field(&ScenarioConfig::buffer_cells));
    t.emplace_back(
        "buffer.congestion_threshold",
        Field{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                if (trim(v) == "auto") {
                  c.congestion_threshold.reset();
                } else {
                  c.congestion_threshold = parse_int<std::uint32_t>(k, v);
                }
              },
              [](const ScenarioConfig& c) {
                return c.congestion_threshold ? std::to_string(*c.congestion_threshold)
                                              : std::string("auto");
              }});
    t.emplace_back("buffer.z", double_field(&ScenarioConfig::z));
    t.emplace_back("buffer.weights",
                   Field{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                           c.weights.clear();
                           for (const auto& item : expand_list(k, v)) {
                             c.weights.push_back(parse_double(k, item));
                           }
                         },
                         [](const ScenarioConfig& c) { return fmt_list(c.weights, fmt_double); }});
    t.emplace_back("buffer.honor_tags", bool_field(&ScenarioConfig::honor_tags));
    t.emplace_back("buffer.check_invariants", bool_field(&ScenarioConfig::check_invariants));

    t.emplace_back("tcp.mss", uint_field(&ScenarioConfig::mss));
    t.emplace_back("tcp.rcv_wnd", uint_field(&ScenarioConfig::rcv_wnd));
    t.emplace_back("tcp.wnd_scale", uint_field(&ScenarioConfig::wnd_scale));
    t.emplace_back("tcp.delayed_ack", bool_field(&ScenarioConfig::delayed_ack));

    t.emplace_back("network.link_rate_bps", uint_field(&ScenarioConfig::link_rate_bps));
    t.emplace_back("network.host_rate_bps", uint_field(&ScenarioConfig::host_rate_bps));
    t.emplace_back("network.rtt", time_field(&ScenarioConfig::rtt));
    t.emplace_back("network.access_delay", time_field(&ScenarioConfig::access_delay));
    t.emplace_back("network.mfs", uint_field(&ScenarioConfig::mfs));

    t.emplace_back("run.duration", time_field(&ScenarioConfig::duration));
    t.emplace_back("run.seed", uint_field(&ScenarioConfig::seed));
    t.emplace_back("run.start_spread", time_field(&ScenarioConfig::start_spread));
    t.emplace_back("run.trace_interval", time_field(&ScenarioConfig::trace_interval));
    t.emplace_back("run.warmup_fraction", double_field(&ScenarioConfig::warmup_fraction));
    return t;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return &f;
  }
  return nullptr;
}

}  // namespace

SimTime parse_duration(std::string_view text) {
  const std::string s = trim(text);
  std::size_t unit_at = s.find_first_not_of("0123456789.");
  if (unit_at == 0 || unit_at == std::string::npos) {
    throw ConfigError("duration '" + s + "' needs a unit (ns, us, ms, s)");
  }
  const std::string num = s.substr(0, unit_at);
  const std::string unit = trim(std::string_view(s).substr(unit_at));
  double scale = 0.0;
  if (unit == "ns") scale = 1.0;
  else if (unit == "us") scale = 1e3;
  else if (unit == "ms") scale = 1e6;
  else if (unit == "s") scale = 1e9;
  else throw ConfigError("duration '" + s + "': unknown unit '" + unit + "'");
  double v = 0.0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc() || p != num.data() + num.size()) {
    throw ConfigError("duration '" + s + "': bad number");
  }
  const double ns = v * scale;
  if (ns > 9.2e18) throw ConfigError("duration '" + s + "' out of range");
  return SimTime::from_ns(std::llround(ns));
}

std::string format_duration(SimTime t) {
  const std::int64_t ns = t.ns();
  if (ns != 0) {
    if (ns % 1'000'000'000 == 0) return std::to_string(ns / 1'000'000'000) + "s";
    if (ns % 1'000'000 == 0) return std::to_string(ns / 1'000'000) + "ms";
    if (ns % 1'000 == 0) return std::to_string(ns / 1'000) + "us";
  }
  return std::to_string(ns) + "ns";
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key,
                             std::string_view value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown scenario key '" + std::string(key) + "'");
  ScenarioConfig out = cfg;
  f->set(out, key, value);
  return out;
}

ScenarioConfig parse_scenario(std::istream& in, const ScenarioConfig& base) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("scenario syntax: ") + e.what());
  }
  ScenarioConfig cfg = base;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' outside any section");
    }
    const bool known = std::any_of(fields().begin(), fields().end(), [&](const auto& f) {
      return f.first.starts_with(section + ".");
    });
    if (!known) throw ConfigError("unknown scenario section [" + section + "]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const Field* f = find_field(full);
      if (!f) throw ConfigError("unknown scenario key '" + full + "'");
      f->set(cfg, full, value.data());
    }
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

std::string to_ini(const ScenarioConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, f] : fields()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::uint64_t> each_times(std::initializer_list<std::uint64_t> values,
                                      std::size_t times) {
  std::vector<std::uint64_t> out;
  for (auto v : values) out.insert(out.end(), times, v);
  return out;
}

ScenarioConfig table1(const std::string& name, std::initializer_list<std::uint64_t> column) {
  ScenarioConfig c;
  c.name = name;
  c.topology = TopologyKind::n_source;
  c.n_tcp = 15;
  c.tcps_per_vc = 1;
  c.policy = PolicyKind::threshold;
  c.thresholds = each_times(column, 3);
  c.buffer_cells = 48000;
  c.group_size = 3;
  return c;
}

ScenarioConfig table4(const std::string& name, std::initializer_list<std::uint64_t> per_vc) {
  ScenarioConfig c;
  c.name = name;
  c.topology = TopologyKind::vc_merge;
  c.n_tcp = 15;
  c.tcps_per_vc = 3;
  c.policy = PolicyKind::gfr;
  c.thresholds = per_vc;
  c.buffer_cells = 48000;
  c.z = 1.5;
  c.weights = {1.0};
  c.group_size = 1;
  return c;
}

ScenarioConfig fig3(const std::string& name, std::optional<std::uint64_t> window_bytes) {
  ScenarioConfig c;
  c.name = name;
  c.topology = TopologyKind::n_source;
  c.n_tcp = 1;
  c.tcps_per_vc = 1;
  c.group_size = 1;
  c.duration = SimTime::from_seconds(20);
  if (window_bytes) {
    c.policy = PolicyKind::threshold;
    c.threshold_basis = ThresholdBasis::cwnd;
    c.thresholds = {*window_bytes};
  }
  return c;
}

const std::map<std::string, std::function<ScenarioConfig()>, std::less<>>& preset_table() {
  static const std::map<std::string, std::function<ScenarioConfig()>, std::less<>> table = {
      {"table1-exp1", [] { return table1("table1-exp1", {305, 611, 917, 1223, 1528}); }},
      {"table1-exp2", [] { return table1("table1-exp2", {458, 917, 1375, 1834, 2293}); }},
      {"table1-exp3", [] { return table1("table1-exp3", {611, 1223, 1834, 2446, 3057}); }},
      {"table1-exp4", [] { return table1("table1-exp4", {764, 1528, 2293, 3057, 3822}); }},
      {"table4-exp1", [] { return table4("table4-exp1", {152, 305, 458, 611, 764}); }},
      {"table4-exp2", [] { return table4("table4-exp2", {305, 611, 917, 1223, 1528}); }},
      {"table4-exp3", [] { return table4("table4-exp3", {611, 1223, 1834, 2446, 3057}); }},
      {"fig3-a", [] { return fig3("fig3-a", 125000); }},
      {"fig3-b", [] { return fig3("fig3-b", 250000); }},
      {"fig3-c", [] { return fig3("fig3-c", 500000); }},
      {"fig3-d", [] { return fig3("fig3-d", std::nullopt); }},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : preset_table()) out.push_back(name);
  return out;
}

ScenarioConfig preset(std::string_view name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  return it->second();
}

}  // namespace gfrsim
