#include "dab/config.hpp"

#include <sstream>

#include "dab/csv.hpp"
#include "dab/errors.hpp"

namespace dab {

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw config_error("config line " + std::to_string(lineno) + ": empty key");
    }
    if (cfg.values_.count(key)) {
      throw config_error("duplicate config key: " + key);
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  return from_string(read_text_file(path));
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw config_error("missing required config key: " + key);
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return get_string(key);
}

double Config::get_double(const std::string& key) {
  return parse_double(get_string(key), key);
}

double Config::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

long long Config::get_int(const std::string& key) {
  return parse_int(get_string(key), key);
}

long long Config::get_int(const std::string& key, long long fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  return parse_u64(get_string(key), key);
}

bool Config::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw config_error(key + ": expected true/false, got '" + v + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) {
  std::vector<double> out;
  for (const auto& piece : split(get_string(key), ',')) {
    out.push_back(parse_double(piece, key));
  }
  return out;
}

std::vector<long long> Config::get_int_list(const std::string& key) {
  std::vector<long long> out;
  for (const auto& piece : split(get_string(key), ',')) {
    out.push_back(parse_int(piece, key));
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void Config::require_all_consumed() const {
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      throw config_error("unknown config key: " + key);
    }
  }
}

}  // namespace dab
