#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace rsgd {

// Flat key=value configuration with '#' comments. Typed getters throw
// std::invalid_argument naming the offending key; unknown keys are
// rejected against a whitelist at command level.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key,
                         std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Resolved key -> value map (deterministic order) for manifest echo.
  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_ = "<empty>";
};

}  // namespace rsgd
