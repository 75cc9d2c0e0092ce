#pragma once

#include <string>
#include <utility>
#include <vector>

namespace csvto {

/// Flat key-value configuration with [section] headers, one `key value` pair
/// per line, '#' comments. Parsing is strict: consumers mark keys as used and
/// require_all_consumed() rejects anything left over, reporting the line.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  long long get_int64(const std::string& section, const std::string& key,
                      long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  /// Throws std::runtime_error naming every key no consumer asked for.
  void require_all_consumed() const;

  /// Sections and keys in file order, for echoing into result summaries.
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };
  const std::vector<Section>& sections() const { return sections_; }
  const std::string& origin() const { return origin_; }

 private:
  const Entry* find(const std::string& section, const std::string& key) const;

  std::vector<Section> sections_;
  std::string origin_;
};

}  // namespace csvto
