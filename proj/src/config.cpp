#include "quadsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "quadsim/error.hpp"

namespace quadsim {

namespace pt = boost::property_tree;

bool ConfigLoad::ok() const {
  return std::none_of(issues.begin(), issues.end(), [](const ConfigIssue& i) {
    return i.severity == ConfigIssue::Severity::kError;
  });
}

namespace {

using Setter = std::function<void(SimulationConfig&, const std::string&)>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("'" + text + "' is not a valid number");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct Key {
  Setter set;
  std::function<std::string(const SimulationConfig&)> get;
};

const std::map<std::string, Key>& schema() {
  static const std::map<std::string, Key> keys = {
      {"simulation.n_nodes",
       {[](SimulationConfig& c, const std::string& v) { c.n_nodes = parse_value<std::size_t>(v); },
        [](const SimulationConfig& c) { return std::to_string(c.n_nodes); }}},
      {"simulation.initial_energy",
       {[](SimulationConfig& c, const std::string& v) { c.initial_energy = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.initial_energy); }}},
      {"simulation.max_rounds",
       {[](SimulationConfig& c, const std::string& v) {
          c.max_rounds = parse_value<std::uint64_t>(v);
        },
        [](const SimulationConfig& c) { return std::to_string(c.max_rounds); }}},
      {"simulation.seed",
       {[](SimulationConfig& c, const std::string& v) { c.seed = parse_value<std::uint64_t>(v); },
        [](const SimulationConfig& c) { return std::to_string(c.seed); }}},
      {"simulation.protocol",
       {[](SimulationConfig& c, const std::string& v) { c.protocol = v; },
        [](const SimulationConfig& c) { return c.protocol; }}},
      {"field.width",
       {[](SimulationConfig& c, const std::string& v) { c.field.width = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.field.width); }}},
      {"field.height",
       {[](SimulationConfig& c, const std::string& v) { c.field.height = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.field.height); }}},
      {"election.p",
       {[](SimulationConfig& c, const std::string& v) { c.election.p = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.election.p); }}},
      {"election.per_area_cap",
       {[](SimulationConfig& c, const std::string& v) {
          c.election.per_area_cap = parse_value<std::size_t>(v);
        },
        [](const SimulationConfig& c) { return std::to_string(c.election.per_area_cap); }}},
      {"election.orphan_policy",
       {[](SimulationConfig& c, const std::string& v) { c.orphan_policy = parse_orphan_policy(v); },
        [](const SimulationConfig& c) { return to_string(c.orphan_policy); }}},
      {"radio.e_elec",
       {[](SimulationConfig& c, const std::string& v) { c.radio.e_elec = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.radio.e_elec); }}},
      {"radio.e_amp",
       {[](SimulationConfig& c, const std::string& v) { c.radio.e_amp = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.radio.e_amp); }}},
      {"radio.e_da",
       {[](SimulationConfig& c, const std::string& v) { c.radio.e_da = parse_value<double>(v); },
        [](const SimulationConfig& c) { return format_double(c.radio.e_da); }}},
      {"radio.bs_x",
       {[](SimulationConfig& c, const std::string& v) {
          c.radio.bs_position.x = parse_value<double>(v);
        },
        [](const SimulationConfig& c) { return format_double(c.radio.bs_position.x); }}},
      {"radio.bs_y",
       {[](SimulationConfig& c, const std::string& v) {
          c.radio.bs_position.y = parse_value<double>(v);
        },
        [](const SimulationConfig& c) { return format_double(c.radio.bs_position.y); }}},
      {"packets.data_bits",
       {[](SimulationConfig& c, const std::string& v) {
          c.packets.data_bits = parse_value<std::int64_t>(v);
        },
        [](const SimulationConfig& c) { return std::to_string(c.packets.data_bits); }}},
      {"packets.ctrl_bits",
       {[](SimulationConfig& c, const std::string& v) {
          c.packets.ctrl_bits = parse_value<std::int64_t>(v);
        },
        [](const SimulationConfig& c) { return std::to_string(c.packets.ctrl_bits); }}},
  };
  return keys;
}

void apply(ConfigLoad& load, const std::string& key, const std::string& value) {
  const auto& keys = schema();
  const auto it = keys.find(key);
  if (it == keys.end()) {
    load.issues.push_back({ConfigIssue::Severity::kError, key, "unknown key"});
    return;
  }
  try {
    it->second.set(load.config, value);
    if (key == "election.per_area_cap") load.cap_derived = false;
  } catch (const ConfigError& e) {
    load.issues.push_back({ConfigIssue::Severity::kError, key, e.what()});
  } catch (const std::exception& e) {
    load.issues.push_back({ConfigIssue::Severity::kError, key, e.what()});
  }
}

void check(ConfigLoad& load, const std::string& field, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    load.issues.push_back({ConfigIssue::Severity::kError, e.field(), e.what()});
  } catch (const NotImplementedError& e) {
    load.issues.push_back({ConfigIssue::Severity::kError, field, e.what()});
  }
}

void cross_check(ConfigLoad& load) {
  SimulationConfig& c = load.config;
  const bool p_ok = c.election.p > 0.0 && c.election.p < 1.0;
  if (load.cap_derived && p_ok && c.n_nodes > 0) {
    c.election.per_area_cap = ElectionParams::default_cap(c.n_nodes, c.election.p);
  }

  if (c.n_nodes < 1) load.issues.push_back({ConfigIssue::Severity::kError, "simulation.n_nodes", "must be >= 1"});
  check(load, "field", [&] { c.field.validate(); });
  if (!(c.initial_energy > 0.0)) {
    load.issues.push_back(
        {ConfigIssue::Severity::kError, "simulation.initial_energy", "must be > 0"});
  }
  if (!p_ok) {
    load.issues.push_back({ConfigIssue::Severity::kError, "election.p",
                           "must lie in the open interval (0, 1), got " +
                               format_double(c.election.p)});
  }
  if (c.election.per_area_cap < 1) {
    load.issues.push_back({ConfigIssue::Severity::kError, "election.per_area_cap", "must be >= 1"});
  }
  check(load, "radio", [&] { c.radio.validate(); });
  check(load, "packets", [&] { c.packets.validate(); });
  if (c.max_rounds < 1) {
    load.issues.push_back({ConfigIssue::Severity::kError, "simulation.max_rounds", "must be >= 1"});
  }
  check(load, "simulation.protocol", [&] { make_protocol(c.protocol); });

  if (load.ok()) {
    if (in_field(c.radio.bs_position, c.field)) {
      load.issues.push_back({ConfigIssue::Severity::kWarning, "radio.bs_x",
                             "base station lies inside the field"});
    }
    const double expected = static_cast<double>(c.n_nodes) * c.election.p;
    const double cap_total = 4.0 * static_cast<double>(c.election.per_area_cap);
    if (cap_total < expected / 2.0 || cap_total > 2.0 * expected + 4.0) {
      load.issues.push_back({ConfigIssue::Severity::kWarning, "election.per_area_cap",
                             "4 x cap = " + format_double(cap_total) +
                                 " is far from the expected heads per round n_nodes x p = " +
                                 format_double(expected)});
    }
  }
}

}  // namespace

ConfigLoad parse_config(std::string_view ini_text, const std::vector<std::string>& overrides) {
  ConfigLoad load;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(ini_text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    load.issues.push_back({ConfigIssue::Severity::kError, "line " + std::to_string(e.line()),
                           e.message()});
    return load;
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      load.issues.push_back({ConfigIssue::Severity::kError, section, "key outside any section"});
      continue;
    }
    for (const auto& [key, value] : body) {
      apply(load, section + "." + key, trim(value.data()));
    }
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      load.issues.push_back({ConfigIssue::Severity::kError, ov, "override must be KEY=VALUE"});
      continue;
    }
    apply(load, trim(std::string_view(ov).substr(0, eq)), trim(std::string_view(ov).substr(eq + 1)));
  }
  cross_check(load);
  return load;
}

ConfigLoad load_config_file(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

std::string render_config(const SimulationConfig& cfg) {
  std::string out;
  std::string current;
  for (const auto& [key, entry] : schema()) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!current.empty()) out += '\n';
      out += "[" + section + "]\n";
      current = section;
    }
    out += key.substr(dot + 1) + " = " + entry.get(cfg) + "\n";
  }
  return out;
}

std::string config_fingerprint(const SimulationConfig& cfg) {
  SimulationConfig blank = cfg;
  blank.seed = 0;
  blank.protocol.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : render_config(blank)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace quadsim
