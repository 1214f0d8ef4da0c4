#include "fracmix/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "fracmix/error.hpp"

namespace fracmix::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config line " + std::to_string(number) + ": empty key or value");
    if (key.find_first_of(" \t") != std::string::npos)
      throw ValidationError("config line " + std::to_string(number) + ": key contains whitespace");
    if (cfg.has(key)) throw ValidationError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Resolved::Resolved(const Config& config, const std::vector<KeySpec>& schema, const std::string& mode) {
  std::set<std::string> known;
  for (const auto& spec : schema) known.insert(spec.key);
  for (const auto& [key, value] : config.entries())
    if (!known.count(key)) throw ValidationError("unknown key '" + key + "' for mode " + mode);
  for (const auto& spec : schema) {
    if (auto it = config.entries().find(spec.key); it != config.entries().end()) {
      values_[spec.key] = it->second;
    } else if (spec.fallback) {
      values_[spec.key] = *spec.fallback;
    } else {
      throw ValidationError("missing required key '" + spec.key + "' for mode " + mode);
    }
  }
}

const std::string& Resolved::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("key '" + key + "' is not part of this mode");
  return it->second;
}

double Resolved::real(const std::string& key) const {
  const std::string& s = text(key);
  const auto parse = [&](const std::string& part) {
    if (part == "pi") return 3.14159265358979323846;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || end == part.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw ValidationError("key '" + key + "': '" + s + "' is not a finite number");
    return v;
  };
  // "p/q" is accepted so steps such as 1/1024 can be written exactly.
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse(s);
  const double den = parse(s.substr(slash + 1));
  if (den == 0.0) throw ValidationError("key '" + key + "': division by zero");
  return parse(s.substr(0, slash)) / den;
}

long Resolved::integer(const std::string& key) const {
  const std::string& s = text(key);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw ValidationError("key '" + key + "': '" + s + "' is not an integer");
  return v;
}

std::size_t Resolved::count(const std::string& key) const {
  const long v = integer(key);
  if (v < 1) throw ValidationError("key '" + key + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

bool Resolved::flag(const std::string& key) const {
  const std::string& s = text(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("key '" + key + "': '" + s + "' is not a boolean");
}

std::string Resolved::comment_line() const {
  std::string out = "#";
  for (const auto& [key, value] : values_) out += " " + key + "=" + value;
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace fracmix::cli
