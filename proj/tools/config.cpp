#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "arpsim/format.hpp"
#include "arpsim/types.hpp"

namespace arpsim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError(where + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is, const std::string& source) {
  ConfigFile cfg;
  std::string line, section;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const std::string where = source + ":" + std::to_string(n);
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) throw ConfigError(where + ": key outside of any [section]");
    const auto [it, inserted] = cfg.entries_.try_emplace({section, key}, Entry{trim(line.substr(eq + 1)), where});
    if (!inserted) throw ConfigError(where + ": duplicate key " + section + "." + key);
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return entries_.contains({section, key});
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) {
  const auto it = entries_.find({section, key});
  if (it == entries_.end()) return nullptr;
  used_.insert({section, key});
  return &it->second;
}

void ConfigFile::record(const std::string& section, const std::string& key, const std::string& value) {
  auto& list = resolved_[section];
  const auto it = std::find_if(list.begin(), list.end(), [&](const auto& kv) { return kv.first == key; });
  if (it != list.end()) {
    it->second = value;
  } else {
    list.emplace_back(key, value);
  }
}

double ConfigFile::number(const std::string& section, const std::string& key, double fallback) {
  double v = fallback;
  if (const Entry* e = find(section, key)) v = to_number(e->value, e->where + " (" + key + ")");
  record(section, key, format_double(v));
  return v;
}

int ConfigFile::integer(const std::string& section, const std::string& key, int fallback) {
  int v = fallback;
  if (const Entry* e = find(section, key)) {
    const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
      throw ConfigError(e->where + " (" + key + "): '" + e->value + "' is not an integer");
    }
  }
  record(section, key, std::to_string(v));
  return v;
}

bool ConfigFile::flag(const std::string& section, const std::string& key, bool fallback) {
  bool v = fallback;
  if (const Entry* e = find(section, key)) {
    if (e->value == "true" || e->value == "yes" || e->value == "1") {
      v = true;
    } else if (e->value == "false" || e->value == "no" || e->value == "0") {
      v = false;
    } else {
      throw ConfigError(e->where + " (" + key + "): expected true or false");
    }
  }
  record(section, key, v ? "true" : "false");
  return v;
}

std::string ConfigFile::text(const std::string& section, const std::string& key, const std::string& fallback) {
  std::string v = fallback;
  if (const Entry* e = find(section, key)) v = e->value;
  record(section, key, v);
  return v;
}

std::vector<double> ConfigFile::numbers(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) {
  std::vector<double> v = fallback;
  if (const Entry* e = find(section, key)) {
    v.clear();
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(to_number(trim(item), e->where + " (" + key + ")"));
    if (v.empty()) throw ConfigError(e->where + " (" + key + "): empty list");
  }
  std::string joined;
  for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? ", " : "") + format_double(v[i]);
  record(section, key, joined);
  return v;
}

void ConfigFile::reject_unused() const {
  std::string unknown;
  for (const auto& [k, e] : entries_) {
    if (!used_.contains(k)) unknown += "\n  " + e.where + ": " + k.first + "." + k.second;
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys:" + unknown);
}

std::string ConfigFile::resolved() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [section, list] : resolved_) {
    if (!first) os << '\n';
    first = false;
    os << '[' << section << "]\n";
    for (const auto& [k, v] : list) os << k << " = " << v << '\n';
  }
  return os.str();
}

}  // namespace arpsim::cli
