// Flat key-value run configuration with dotted keys (model.alpha=1.0).
// The canonical text form is sorted and printed with full precision so a
// re-executed run reproduces its outputs byte for byte; the FNV-1a hash of
// that text stamps every output file.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "phasered/stuart_landau.hpp"

namespace phasered {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse_text(const std::string& text);
  static RunConfig load_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void set_num(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  // Sorted key=value lines, numbers at full precision.
  std::string canonical_text() const;
  // FNV-1a 64-bit of canonical_text(), as 16 hex digits.
  std::string hash() const;

  void save_file(const std::string& path) const;

  sl::SLParams sl_params() const;
  void set_sl_params(const sl::SLParams& p);

  bool operator==(const RunConfig& other) const { return kv_ == other.kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Full-precision, locale-independent number formatting used by every
// emitter (shortest round-trip representation).
std::string format_num(double v);

}  // namespace phasered
