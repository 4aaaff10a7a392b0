#pragma once

// CLI plumbing: deterministic JSON/CSV emission (17 significant digits,
// ordered keys, LF line endings), the flat key=value config format with
// sections, and stderr logging gated by SCHOUTEN_LOG.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schouten::cli {

// %.17g; non-finite values render as null in JSON and nan/inf in CSV.
std::string fmt_double(double x);

std::string json_escape(const std::string& s);

// Streaming writer producing deterministically ordered JSON.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null_value();

  JsonWriter& kv(const std::string& k, double v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, int v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, bool v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const std::string& v) { return key(k).value(v); }
  JsonWriter& kv(const std::string& k, const char* v) { return key(k).value(v); }

  std::string str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> has_item_;
  bool pending_key_ = false;
};

// Section -> key -> raw value; comments start with '#'.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

// Parses the file and rejects unknown sections or keys.
// `allowed` maps a section name to its permitted keys.
ConfigMap parse_config(const std::string& path,
                       const std::map<std::string, std::vector<std::string>>& allowed);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double config_double(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                     double fallback);
int config_int(const ConfigMap& cfg, const std::string& sec, const std::string& key, int fallback);
bool config_bool(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                 bool fallback);
std::string config_string(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                          const std::string& fallback);
std::vector<double> config_list(const ConfigMap& cfg, const std::string& sec,
                                const std::string& key, const std::vector<double>& fallback);

std::vector<double> parse_double_list(const std::string& raw);

int log_level();
void log_line(int level, const std::string& msg);

void write_file(const std::string& path, const std::string& contents);

}  // namespace schouten::cli
