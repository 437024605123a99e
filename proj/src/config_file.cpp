#include "rsgd/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rsgd/dataset_io.hpp"

namespace rsgd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string ConfigFile::get_string(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' expects a real number, got '" + it->second +
                                "'");
  }
}

std::int64_t ConfigFile::get_int(const std::string& key,
                                 std::int64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' expects an integer, got '" + it->second +
                                "'");
  }
}

std::uint64_t ConfigFile::get_uint(const std::string& key,
                                   std::uint64_t fallback) const {
  const std::int64_t v =
      get_int(key, static_cast<std::int64_t>(fallback));
  if (v < 0) {
    throw std::invalid_argument("config key '" + key +
                                "' expects a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::invalid_argument("config key '" + key +
                              "' expects true/false, got '" + it->second +
                              "'");
}

}  // namespace rsgd
