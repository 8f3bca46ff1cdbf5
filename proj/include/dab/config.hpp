#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace dab {

// key=value configuration with strict consumption tracking.  Lines whose
// first non-blank character is '#' are comments.  Duplicate keys are
// rejected.  After a command has pulled everything it understands,
// require_all_consumed() turns leftover keys into config errors so typos
// never pass silently.
class Config {
 public:
  static Config from_string(const std::string& text);
  static Config from_file(const std::string& path);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long long get_int(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);

  // Comma-separated lists.
  std::vector<double> get_double_list(const std::string& key);
  std::vector<long long> get_int_list(const std::string& key);

  // Inserts or replaces a key (used for command line overrides).
  void set(const std::string& key, const std::string& value);

  void require_all_consumed() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace dab
