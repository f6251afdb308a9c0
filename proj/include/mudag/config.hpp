#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mudag {

// Flat key = value configuration with dotted keys (network.m, method.mudag.K).
// '#' starts a comment; blank lines are skipped; duplicate keys are errors.
// Reads are tracked so callers can reject unknown keys after consuming.
class KVConfig {
 public:
  static KVConfig parse_file(const std::string& path);
  static KVConfig parse_string(const std::string& text,
                               const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  // Required getters throw std::runtime_error naming the key; the defaulted
  // forms return def when the key is absent.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long def) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int def) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool def) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;

  // Comma-separated list; empty value yields an empty list.
  std::vector<std::string> get_list(const std::string& key) const;

  // Keys never read through a getter, sorted. Untouched raw access.
  std::vector<std::string> unused_keys() const;
  const std::map<std::string, std::string>& items() const { return kv_; }

 private:
  std::string need(const std::string& key) const;

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
  std::string origin_ = "<empty>";
};

}  // namespace mudag
