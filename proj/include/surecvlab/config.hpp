#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "surecvlab/common.hpp"

namespace surecv {

/// Flat key-value study configuration: one `key = value` per line, '#'
/// comments, later `--set` overrides replacing file values. Every key that a
/// command does not consume is rejected.
class StudyConfig {
public:
  static StudyConfig fromFile(const std::string& path);
  static StudyConfig empty() { return StudyConfig(); }

  void overlay(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string getString(const std::string& key, const std::string& def);
  std::string requireString(const std::string& key);
  double getReal(const std::string& key, double def, double lo, double hi);
  double requireReal(const std::string& key, double lo, double hi);
  long getInt(const std::string& key, long def, long lo, long hi);
  long requireInt(const std::string& key, long lo, long hi);
  std::uint64_t getU64(const std::string& key, std::uint64_t def);
  bool getBool(const std::string& key, bool def);
  std::vector<double> getRealList(const std::string& key, const std::vector<double>& def);
  std::vector<double> requireRealList(const std::string& key);
  std::vector<long> getIntList(const std::string& key, const std::vector<long>& def);
  Vec requireVector(const std::string& key, int k);
  /// Matrix forms: "identity", "diag:a,b,...", or rows "a,b;c,d".
  Mat getMatrix(const std::string& key, int k, const std::string& def);

  /// Throws ConfigError naming the first key no getter consumed.
  void requireAllConsumed() const;

private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> consumed_;
  const std::string& raw(const std::string& key);
};

/// Grid helper shared by several commands: either an explicit list under
/// `<prefix>s`, or `<prefix>Min`/`<prefix>Max`/`<prefix>Count`/`<prefix>Scale`
/// (linear|log).
std::vector<double> parse_grid(StudyConfig& cfg, const std::string& prefix, bool required);

}  // namespace surecv
