#include "cli_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace schouten::cli {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_item_.empty()) {
    if (has_item_.back()) out_ += ",";
    has_item_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += "{";
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += "[";
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  if (has_item_.back()) out_ += ",";
  has_item_.back() = true;
  out_ += "\"" + json_escape(k) + "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  if (std::isfinite(v)) {
    out_ += fmt_double(v);
  } else {
    out_ += "null";
  }
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  out_ += "\"" + json_escape(v) + "\"";
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::null_value() {
  separate();
  out_ += "null";
  return *this;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigMap parse_config(const std::string& path,
                       const std::map<std::string, std::vector<std::string>>& allowed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ConfigMap cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed.count(section)) throw ConfigError("unknown config section [" + section + "]");
      cfg[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
    if (section.empty()) throw ConfigError("key outside of any section at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const auto& keys = allowed.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
    if (cfg[section].count(key)) throw ConfigError("duplicate key '" + key + "' in section [" + section + "]");
    cfg[section][key] = val;
  }
  return cfg;
}

namespace {

std::optional<std::string> raw(const ConfigMap& cfg, const std::string& sec, const std::string& key) {
  const auto s = cfg.find(sec);
  if (s == cfg.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

}  // namespace

double config_double(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                     double fallback) {
  const auto v = raw(cfg, sec, key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number for " + sec + "." + key + ": '" + *v + "'");
  }
}

int config_int(const ConfigMap& cfg, const std::string& sec, const std::string& key, int fallback) {
  const auto v = raw(cfg, sec, key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const int i = std::stoi(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer for " + sec + "." + key + ": '" + *v + "'");
  }
}

bool config_bool(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                 bool fallback) {
  const auto v = raw(cfg, sec, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError("cannot parse boolean for " + sec + "." + key + ": '" + *v + "'");
}

std::string config_string(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                          const std::string& fallback) {
  const auto v = raw(cfg, sec, key);
  return v ? *v : fallback;
}

std::vector<double> parse_double_list(const std::string& rawlist) {
  std::vector<double> out;
  std::stringstream ss(rawlist);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<double> config_list(const ConfigMap& cfg, const std::string& sec,
                                const std::string& key, const std::vector<double>& fallback) {
  const auto v = raw(cfg, sec, key);
  if (!v) return fallback;
  try {
    return parse_double_list(*v);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse list for " + sec + "." + key + ": '" + *v + "'");
  }
}

int log_level() {
  const char* env = std::getenv("SCHOUTEN_LOG");
  if (!env) return 0;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    return 0;
  }
}

void log_line(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[schouten] " << msg << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << contents;
}

}  // namespace schouten::cli
