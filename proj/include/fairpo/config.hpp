#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairpo {

/// Flat sectioned key-value config text:
///
///   [section]
///   key = 1.5            # comment
///   name = "quoted"
///   flag = true
///   xs = [1.0, 2.0, 3.0]
///
/// Values stay raw strings until asked for with a typed getter.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is, const std::string& origin = "<stream>") {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::string stripped = strip_comment(line);
      const std::string trimmed = trim(stripped);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": bad section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream is(text);
    return parse(is, origin);
  }

  static ConfigFile load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    return parse(is, path);
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback = "") const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
  }

  double get_double(const std::string& section, const std::string& key, double fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    return parse_double(it->second, section + "." + key);
  }

  int get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
      return static_cast<int>(v);
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key " + section + "." + key +
                               " is not an integer: " + it->second);
    }
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    return static_cast<std::uint64_t>(std::stoull(it->second));
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw std::runtime_error(origin_ + ": key " + section + "." + key +
                             " is not a boolean: " + it->second);
  }

  std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                      std::vector<double> fallback = {}) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw std::runtime_error(origin_ + ": key " + section + "." + key + " is not a list: " + v);
    std::vector<double> out;
    std::istringstream ls(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ls, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      out.push_back(parse_double(t, section + "." + key));
    }
    return out;
  }

  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                std::vector<int> fallback = {}) const {
    if (!has(section, key)) return fallback;
    std::vector<int> out;
    for (double v : get_double_list(section, key)) out.push_back(static_cast<int>(v));
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  static std::string strip_comment(const std::string& s) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') in_quotes = !in_quotes;
      if (s[i] == '#' && !in_quotes) return s.substr(0, i);
    }
    return s;
  }

  double parse_double(const std::string& s, const std::string& where) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key " + where + " is not a number: " + s);
    }
  }

  std::map<std::string, std::string> values_;
  std::string origin_;
};

}  // namespace fairpo
