#include "ncwnnm/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ncwnnm/errors.hpp"

namespace ncw {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    if (kv.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    kv.entries_.emplace(key, Entry{value, line});
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValueFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  it->second.used = true;
  return it->second.value;
}

std::optional<double> KeyValueFile::get_double(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size())
    throw ConfigError("'" + key + "' is not a number: " + *s, line_of(key));
  return v;
}

std::optional<long long> KeyValueFile::get_int(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size())
    throw ConfigError("'" + key + "' is not an integer: " + *s, line_of(key));
  return v;
}

std::optional<bool> KeyValueFile::get_bool(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  if (*s == "true" || *s == "1" || *s == "yes") return true;
  if (*s == "false" || *s == "0" || *s == "no") return false;
  throw ConfigError("'" + key + "' is not a boolean: " + *s, line_of(key));
}

void KeyValueFile::reject_unknown() const {
  for (const auto& [key, entry] : entries_)
    if (!entry.used) throw ConfigError("unknown key '" + key + "'", entry.line);
}

int KeyValueFile::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string format_exact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void with_key_lines(const KeyValueFile& kv, const std::function<void()>& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    const std::string key = what.substr(0, what.find(' '));
    if (e.line() == 0 && kv.contains(key)) throw ConfigError(what, kv.line_of(key));
    throw;
  }
}

}  // namespace ncw
