#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rftwin {

/// Ordered `key = value` pairs as read from a flat config file. Lines starting
/// with '#' are comments; keys are unique.
class KeyValues {
 public:
  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;
  const std::string* find(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

KeyValues parse_key_values(std::istream& in, const std::string& source_name);
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

// Strict scalar parsers; throw Error(InvalidConfig) naming `key` on failure.
double parse_double(std::string_view text, std::string_view key);
std::int64_t parse_int(std::string_view text, std::string_view key);
std::uint64_t parse_u64(std::string_view text, std::string_view key);
bool parse_bool(std::string_view text, std::string_view key);
std::vector<std::string> split_list(std::string_view text);

/// Shortest representation that round-trips exactly.
std::string format_double(double value);

}  // namespace rftwin
