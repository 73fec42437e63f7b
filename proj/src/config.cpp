#include "phasered/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phasered {

std::string format_num(double v) {
  char buf[48];
  // shortest representation that round-trips
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
  }
  return buf;
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config line " + std::to_string(lineno) +
                    ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      if (a == std::string::npos) return std::string();
      return s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw IoError("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void RunConfig::set_num(const std::string& key, double value) {
  kv_[key] = format_num(value);
}

void RunConfig::set_int(const std::string& key, long long value) {
  kv_[key] = std::to_string(value);
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw IoError("config key " + key + ": not a number: " + it->second);
  }
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw IoError("config key " + key + ": not an integer: " + it->second);
  }
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::string RunConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config file: " + path);
  out << canonical_text();
  if (!out) throw IoError("failed writing config file: " + path);
}

sl::SLParams RunConfig::sl_params() const {
  sl::SLParams p;
  p.alpha = get_num("model.alpha", p.alpha);
  p.beta = get_num("model.beta", p.beta);
  p.gamma = get_num("model.gamma", p.gamma);
  p.delta = get_num("model.delta", p.delta);
  p.eps = get_num("model.eps", p.eps);
  p.rho = get_num("model.rho", p.rho);
  p.tau = get_num("model.tau", p.tau);
  return p;
}

void RunConfig::set_sl_params(const sl::SLParams& p) {
  set_num("model.alpha", p.alpha);
  set_num("model.beta", p.beta);
  set_num("model.gamma", p.gamma);
  set_num("model.delta", p.delta);
  set_num("model.eps", p.eps);
  set_num("model.rho", p.rho);
  set_num("model.tau", p.tau);
}

}  // namespace phasered
