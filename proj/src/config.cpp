#include "surecvlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace surecv {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

}  // namespace

StudyConfig StudyConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  StudyConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.kv_.count(key))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

void StudyConfig::overlay(const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("--set: empty key");
  kv_[key] = value;
}

const std::string& StudyConfig::raw(const std::string& key) {
  consumed_.insert(key);
  return kv_.at(key);
}

std::string StudyConfig::getString(const std::string& key, const std::string& def) {
  consumed_.insert(key);
  return has(key) ? kv_.at(key) : def;
}

std::string StudyConfig::requireString(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return raw(key);
}

double StudyConfig::getReal(const std::string& key, double def, double lo, double hi) {
  consumed_.insert(key);
  if (!has(key)) return def;
  const double x = parse_double(key, kv_.at(key));
  if (!std::isfinite(x) || x < lo || x > hi)
    throw ConfigError("key '" + key + "': value " + kv_.at(key) + " out of range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double StudyConfig::requireReal(const std::string& key, double lo, double hi) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return getReal(key, 0.0, lo, hi);
}

long StudyConfig::getInt(const std::string& key, long def, long lo, long hi) {
  consumed_.insert(key);
  if (!has(key)) return def;
  const double x = parse_double(key, kv_.at(key));
  const long v = static_cast<long>(x);
  if (static_cast<double>(v) != x)
    throw ConfigError("key '" + key + "': expected an integer, got '" + kv_.at(key) + "'");
  if (v < lo || v > hi)
    throw ConfigError("key '" + key + "': value " + std::to_string(v) + " out of range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

long StudyConfig::requireInt(const std::string& key, long lo, long hi) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return getInt(key, 0, lo, hi);
}

std::uint64_t StudyConfig::getU64(const std::string& key, std::uint64_t def) {
  consumed_.insert(key);
  if (!has(key)) return def;
  const std::string& v = kv_.at(key);
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a 64-bit unsigned integer");
  }
}

bool StudyConfig::getBool(const std::string& key, bool def) {
  consumed_.insert(key);
  if (!has(key)) return def;
  const std::string& v = kv_.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> StudyConfig::getRealList(const std::string& key,
                                             const std::vector<double>& def) {
  consumed_.insert(key);
  if (!has(key)) return def;
  std::vector<double> out;
  for (const auto& tok : split(kv_.at(key), ',')) {
    const std::string t = trim(tok);
    if (t.empty()) throw ConfigError("key '" + key + "': empty list element");
    out.push_back(parse_double(key, t));
  }
  return out;
}

std::vector<double> StudyConfig::requireRealList(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return getRealList(key, {});
}

std::vector<long> StudyConfig::getIntList(const std::string& key, const std::vector<long>& def) {
  consumed_.insert(key);
  if (!has(key)) return def;
  std::vector<long> out;
  for (const auto& tok : split(kv_.at(key), ',')) {
    const std::string t = trim(tok);
    const double x = parse_double(key, t);
    const long v = static_cast<long>(x);
    if (static_cast<double>(v) != x)
      throw ConfigError("key '" + key + "': expected integers, got '" + t + "'");
    out.push_back(v);
  }
  return out;
}

Vec StudyConfig::requireVector(const std::string& key, int k) {
  const std::vector<double> v = requireRealList(key);
  if (static_cast<int>(v.size()) != k)
    throw ConfigError("key '" + key + "': expected " + std::to_string(k) + " entries, got " +
                      std::to_string(v.size()));
  Vec out(k);
  for (int i = 0; i < k; ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

Mat StudyConfig::getMatrix(const std::string& key, int k, const std::string& def) {
  consumed_.insert(key);
  const std::string spec = has(key) ? kv_.at(key) : def;
  if (spec == "identity") return Mat::Identity(k, k);
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> d;
    for (const auto& tok : split(spec.substr(5), ','))
      d.push_back(parse_double(key, trim(tok)));
    if (static_cast<int>(d.size()) != k)
      throw ConfigError("key '" + key + "': diag needs " + std::to_string(k) + " entries");
    Mat m = Mat::Zero(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }
  const auto rows = split(spec, ';');
  if (static_cast<int>(rows.size()) != k)
    throw ConfigError("key '" + key + "': expected " + std::to_string(k) +
                      " ';'-separated rows, 'identity', or 'diag:...'");
  Mat m(k, k);
  for (int i = 0; i < k; ++i) {
    const auto cells = split(rows[static_cast<std::size_t>(i)], ',');
    if (static_cast<int>(cells.size()) != k)
      throw ConfigError("key '" + key + "': row " + std::to_string(i) + " needs " +
                        std::to_string(k) + " entries");
    for (int j = 0; j < k; ++j) m(i, j) = parse_double(key, trim(cells[static_cast<std::size_t>(j)]));
  }
  return m;
}

void StudyConfig::requireAllConsumed() const {
  for (const auto& [key, value] : kv_)
    if (!consumed_.count(key)) throw ConfigError("unknown key '" + key + "'");
}

std::vector<double> parse_grid(StudyConfig& cfg, const std::string& prefix, bool required) {
  const std::string listKey = prefix + "s";
  const bool hasList = cfg.has(listKey);
  const bool hasRange = cfg.has(prefix + "Min") || cfg.has(prefix + "Max") ||
                        cfg.has(prefix + "Count") || cfg.has(prefix + "Scale");
  if (hasList && hasRange)
    throw ConfigError("give either '" + listKey + "' or the '" + prefix + "Min/Max/Count' keys, not both");
  if (hasList) {
    const std::vector<double> g = cfg.requireRealList(listKey);
    if (g.empty()) throw ConfigError("key '" + listKey + "': empty grid");
    return g;
  }
  if (!hasRange) {
    if (required) throw ConfigError("missing grid: give '" + listKey + "' or '" + prefix + "Min/Max/Count'");
    return {};
  }
  const double lo = cfg.requireReal(prefix + "Min", 0.0, 1e18);
  const double hi = cfg.requireReal(prefix + "Max", 0.0, 1e18);
  const long count = cfg.requireInt(prefix + "Count", 1, 100000000);
  const std::string scale = cfg.getString(prefix + "Scale", "linear");
  if (hi < lo) throw ConfigError("'" + prefix + "Max' must be >= '" + prefix + "Min'");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  if (scale == "linear") {
    for (long i = 0; i < count; ++i)
      g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  } else if (scale == "log") {
    if (!(lo > 0.0)) throw ConfigError("'" + prefix + "Scale = log' needs '" + prefix + "Min' > 0");
    const double la = std::log10(lo), lb = std::log10(hi);
    for (long i = 0; i < count; ++i)
      g[static_cast<std::size_t>(i)] =
          std::pow(10.0, la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1));
  } else {
    throw ConfigError("'" + prefix + "Scale' must be 'linear' or 'log'");
  }
  return g;
}

}  // namespace surecv
