#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace ncw {

/// Plain-text `key = value` document. Blank lines and `#` comments are
/// ignored; keys are case-sensitive and may appear once. Every lookup marks the
/// key as consumed so callers can reject unknown keys afterwards.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  /// Throws ConfigError naming the first key never looked up.
  void reject_unknown() const;

  int line_of(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::map<std::string, Entry> entries_;
};

/// Runs `check`. A ConfigError without a line number whose message starts
/// with a key of `kv` is rethrown carrying that key's line.
void with_key_lines(const KeyValueFile& kv, const std::function<void()>& check);

/// Serialises a double so that parsing it back yields the identical value.
std::string format_exact(double value);

}  // namespace ncw
