#include "csvto/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csvto {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string current;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                 ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                 ": empty section name");
      cfg.sections_.push_back({current, {}});
      continue;
    }
    if (current.empty())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": key outside any [section]");
    const auto split = line.find_first_of(" \t=");
    if (split == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key value'");
    const std::string key = trim(line.substr(0, split));
    std::string value = trim(line.substr(split + 1));
    if (!value.empty() && value.front() == '=') value = trim(value.substr(1));
    if (value.empty())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": key '" + key +
                               "' has no value");
    auto& section = cfg.sections_.back();
    for (const auto& e : section.entries)
      if (e.key == key)
        throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                 ": duplicate key '" + key + "'");
    section.entries.push_back({key, value, line_no, false});
  }
  return cfg;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& e : s.entries)
      if (e.key == key) {
        e.used = true;
        return &e;
      }
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t used = 0;
    const double v = std::stod(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                             "' is not a number: " + e->value);
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  return static_cast<int>(get_int64(section, key, fallback));
}

long long Config::get_int64(const std::string& section, const std::string& key,
                            long long fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t used = 0;
    const long long v = std::stoll(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                             "' is not an integer: " + e->value);
  }
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                           "' is not a boolean: " + e->value);
}

void Config::require_all_consumed() const {
  std::string complaints;
  for (const auto& s : sections_)
    for (const auto& e : s.entries)
      if (!e.used)
        complaints += origin_ + ":" + std::to_string(e.line) + ": unknown key '" + s.name +
                      "." + e.key + "'\n";
  if (!complaints.empty()) throw std::runtime_error(complaints);
}

}  // namespace csvto
