#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

// Small text-artifact helpers: RFC-4180 CSV fields with 17-significant-digit
// reals, JSON string quoting, and the flat dotted key=value config format.

namespace mollicrit::csvio {

std::string format_real(double v);

// Quote a CSV field if it contains comma, quote, or newline (RFC 4180).
std::string csv_field(const std::string& s);

// JSON string literal (quotes and escapes included).
std::string csv_quote_json(const std::string& s);

struct ConfigMap {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& key) const;
};

// Lines of "dotted.key = value"; '#' starts a comment; blank lines ignored.
// Throws std::runtime_error with a line diagnostic on malformed input.
ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mollicrit::csvio
