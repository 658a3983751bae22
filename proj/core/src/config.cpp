#include "ubq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ubq/error.hpp"

namespace ubq {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double strict_double(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "not a number: '" + whole + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error(ErrorCode::kParse, "not a number: '" + whole + "'");
  return v;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorCode::kParse, "empty number");
  const auto slash = t.find('/');
  if (slash == std::string::npos) return strict_double(t, t);
  const double p = strict_double(trim(t.substr(0, slash)), t);
  const double q = strict_double(trim(t.substr(slash + 1)), t);
  if (q == 0.0) throw Error(ErrorCode::kParse, "zero denominator in '" + t + "'");
  return p / q;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ": empty key");
    cfg.data_[section][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw Error(ErrorCode::kInvalidArgument, "missing [" + section + "] " + key);
  return data_.at(section).at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? data_.at(section).at(key) : fallback;
}

double Config::get_number(const std::string& section, const std::string& key) const {
  return parse_number(get_string(section, key));
}

double Config::get_number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  const double v = get_number(section, key);
  if (v != std::floor(v)) throw Error(ErrorCode::kParse, "[" + section + "] " + key + " must be an integer");
  return static_cast<std::int64_t>(v);
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(section, key) ? parse_number_list(get_string(section, key)) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[section][key] = value;
}

}  // namespace ubq
