#pragma once

// Experiment config files: `key = value` lines grouped under `[section]`
// headers, `#` or `;` comments. Every key read (or defaulted) is echoed into
// the resolved config; keys nobody reads are rejected.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace arpsim::cli {

class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is, const std::string& source = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key, double fallback);
  int integer(const std::string& section, const std::string& key, int fallback);
  bool flag(const std::string& section, const std::string& key, bool fallback);
  std::string text(const std::string& section, const std::string& key, const std::string& fallback);
  /// Comma-separated list of numbers.
  std::vector<double> numbers(const std::string& section, const std::string& key, const std::vector<double>& fallback);

  /// Records a value that did not come from the file (e.g. a command-line override).
  void record(const std::string& section, const std::string& key, const std::string& value);

  /// Throws ConfigError naming every key in the file that was never read.
  void reject_unused() const;

  /// Fully resolved config (file values plus defaults), same syntax as the input.
  std::string resolved() const;

 private:
  struct Entry {
    std::string value;
    std::string where;
  };
  const Entry* find(const std::string& section, const std::string& key);

  std::map<std::pair<std::string, std::string>, Entry> entries_;
  std::set<std::pair<std::string, std::string>> used_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> resolved_;
};

}  // namespace arpsim::cli
