#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracmix::cli {

/// Flat `key = value` configuration; `#` starts a comment.
class Config {
 public:
  /// Throws ValidationError naming the offending line.
  static Config parse(const std::string& text);
  /// Throws IoError when the file cannot be read.
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct KeySpec {
  std::string key;
  std::optional<std::string> fallback;  // empty: the key is required
};

/// Config with every key checked against the schema and defaults filled in.
class Resolved {
 public:
  Resolved(const Config& config, const std::vector<KeySpec>& schema, const std::string& mode);

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // integer >= 1
  bool flag(const std::string& key) const;

  /// `# key=value ...` sorted by key.
  std::string comment_line() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// %.17g formatting used by every artifact.
std::string format_real(double v);

}  // namespace fracmix::cli
