#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ubq {

/// Parses "x", "p/q" or "-p/q" into a double. Throws kParse.
double parse_number(const std::string& text);

/// Comma-separated numbers, each accepted by parse_number.
std::vector<double> parse_number_list(const std::string& text);

/// Key-value text with [sections]; '#' starts a comment. Keys before the first
/// section header belong to the section "".
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return data_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace ubq
