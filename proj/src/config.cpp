#include "icsim/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "icsim/errors.hpp"

namespace icsim {

namespace {

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError("config: cannot parse value '" + text + "' for key '" + key + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("config: cannot parse value '" + text + "' for key '" + key + "'");
  return value;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    const auto exp_field = [&t](const std::string& key, double ExperimentParams::* field) {
      t[key] = [field](Config& c, const std::string& k, const std::string& v) {
        c.experiment.*field = parse_double(k, v);
      };
    };
    const auto det_field = [&t](const std::string& key, double DetectionParams::* field) {
      t[key] = [field](Config& c, const std::string& k, const std::string& v) {
        c.detection.*field = parse_double(k, v);
      };
    };
    exp_field("gain", &ExperimentParams::gain);
    exp_field("t_mag", &ExperimentParams::t_mag);
    exp_field("t_phase", &ExperimentParams::t_phase);
    exp_field("gamma_mag", &ExperimentParams::gamma_mag);
    exp_field("gamma_phase", &ExperimentParams::gamma_phase);
    exp_field("phi_p1", &ExperimentParams::phi_p1);
    exp_field("phi_p2", &ExperimentParams::phi_p2);
    exp_field("phi_s1", &ExperimentParams::phi_s1);
    exp_field("phi_s2", &ExperimentParams::phi_s2);
    exp_field("phi_i1", &ExperimentParams::phi_i1);
    exp_field("phi_i3", &ExperimentParams::phi_i3);
    exp_field("k_s", &ExperimentParams::k_s);
    exp_field("k_i", &ExperimentParams::k_i);
    exp_field("crystal_length", &ExperimentParams::crystal_length);
    det_field("t_window", &DetectionParams::t_window);
    det_field("t_coherence", &DetectionParams::t_coherence);
    det_field("rate_signal", &DetectionParams::rate_signal);
    det_field("rate_idler", &DetectionParams::rate_idler);
    det_field("bg_rate_signal", &DetectionParams::bg_rate_signal);
    det_field("bg_rate_idler", &DetectionParams::bg_rate_idler);
    det_field("integration_time", &DetectionParams::integration_time);
    det_field("eta_signal", &DetectionParams::eta_signal);
    det_field("eta_idler", &DetectionParams::eta_idler);
    t["rng_seed"] = [](Config& c, const std::string& k, const std::string& v) {
      c.detection.rng_seed = parse_u64(k, v);
    };
    return t;
  }();
  return table;
}

/// Section membership, to reject keys placed under the wrong header.
const std::map<std::string, std::string>& key_sections() {
  static const std::map<std::string, std::string> table = [] {
    std::map<std::string, std::string> t;
    for (const char* k :
         {"gain", "t_mag", "t_phase", "gamma_mag", "gamma_phase", "phi_p1", "phi_p2",
          "phi_s1", "phi_s2", "phi_i1", "phi_i3", "k_s", "k_i", "crystal_length"})
      t[k] = "experiment";
    for (const char* k :
         {"t_window", "t_coherence", "rate_signal", "rate_idler", "bg_rate_signal",
          "bg_rate_idler", "integration_time", "eta_signal", "eta_idler", "rng_seed"})
      t[k] = "detection";
    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config parse_config(std::istream& in) {
  Config config;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "detection")
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown section '" + section + "'");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto sec_it = key_sections().find(key);
    if (sec_it == key_sections().end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                        "' appears before any section header");
    if (sec_it->second != section)
      throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                        "' belongs to section [" + sec_it->second + "]");
    setters().at(key)(config, key, value);
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

void apply_override(Config& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second(config, key, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const char* k :
       {"gain", "t_mag", "t_phase", "gamma_mag", "gamma_phase", "phi_p1", "phi_p2",
        "phi_s1", "phi_s2", "phi_i1", "phi_i3", "k_s", "k_i", "crystal_length",
        "t_window", "t_coherence", "rate_signal", "rate_idler", "bg_rate_signal",
        "bg_rate_idler", "integration_time", "eta_signal", "eta_idler", "rng_seed"})
    keys.emplace_back(k);
  return keys;
}

}  // namespace icsim
