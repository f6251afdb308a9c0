#include "mudag/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mudag {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& what,
                            const std::string& val) {
  throw std::runtime_error("config: key '" + key + "': expected " + what +
                           ", got '" + val + "'");
}

}  // namespace

KVConfig KVConfig::parse_string(const std::string& text,
                                const std::string& origin) {
  KVConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    auto fail = [&](const std::string& what) {
      throw std::runtime_error("config: " + origin + ":" +
                               std::to_string(lineno) + ": " + what);
    };
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail("bad key '" + key + "'");
    if (cfg.kv_.count(key)) fail("duplicate key '" + key + "'");
    cfg.kv_[key] = val;
  }
  return cfg;
}

KVConfig KVConfig::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str(), path);
}

bool KVConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

void KVConfig::set(const std::string& key, const std::string& value) {
  if (!valid_key(key))
    throw std::runtime_error("config: bad key '" + key + "'");
  kv_[key] = value;
}

std::string KVConfig::need(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw std::runtime_error("config: missing required key '" + key + "' (" +
                             origin_ + ")");
  used_.insert(key);
  return it->second;
}

std::string KVConfig::get_string(const std::string& key) const {
  return need(key);
}

std::string KVConfig::get_string(const std::string& key,
                                 const std::string& def) const {
  if (!has(key)) return def;
  return need(key);
}

long KVConfig::get_long(const std::string& key) const {
  const std::string v = need(key);
  char* end = nullptr;
  const long r = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') bad_value(key, "integer", v);
  return r;
}

long KVConfig::get_long(const std::string& key, long def) const {
  return has(key) ? get_long(key) : def;
}

int KVConfig::get_int(const std::string& key) const {
  const long r = get_long(key);
  if (r < -2147483647L || r > 2147483647L)
    bad_value(key, "32-bit integer", need(key));
  return int(r);
}

int KVConfig::get_int(const std::string& key, int def) const {
  return has(key) ? get_int(key) : def;
}

double KVConfig::get_double(const std::string& key) const {
  const std::string v = need(key);
  char* end = nullptr;
  const double r = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') bad_value(key, "number", v);
  return r;
}

double KVConfig::get_double(const std::string& key, double def) const {
  return has(key) ? get_double(key) : def;
}

bool KVConfig::get_bool(const std::string& key) const {
  const std::string v = need(key);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad_value(key, "boolean", v);
}

bool KVConfig::get_bool(const std::string& key, bool def) const {
  return has(key) ? get_bool(key) : def;
}

std::uint64_t KVConfig::get_u64(const std::string& key) const {
  const std::string v = need(key);
  char* end = nullptr;
  const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || v[0] == '-')
    bad_value(key, "unsigned integer", v);
  return r;
}

std::uint64_t KVConfig::get_u64(const std::string& key,
                                std::uint64_t def) const {
  return has(key) ? get_u64(key) : def;
}

std::vector<std::string> KVConfig::get_list(const std::string& key) const {
  const std::string v = need(key);
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(v);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<std::string> KVConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

}  // namespace mudag
