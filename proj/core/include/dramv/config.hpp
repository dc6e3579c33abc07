#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dramv/dramml.hpp"

namespace dramv {

/// One `key=value` line of a flat config-style file.
struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Parses flat `key=value` text with `#` comments. Throws ParseError on
/// lines without '=' or with duplicate keys.
std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& origin);

/// Generation parameters: instance counts per hierarchy count parameter and
/// timing values in clock cycles.
struct Config {
  std::string name;
  std::string standard_name;
  std::map<std::string, std::uint32_t> instance_counts;
  std::map<std::string, std::uint32_t> timing_values;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Builds a Config for `spec` from key/value entries. Reserved keys are
/// `format`, `standard`, `name` and `preset` (the latter is ignored here and
/// resolved by the caller into `base_timings`). Every other key must name a
/// hierarchy count parameter or a timing parameter of the NetSpec.
Config make_config(const NetSpec& spec, const std::vector<KeyValue>& entries,
                   const std::map<std::string, std::uint32_t>& base_timings = {},
                   const std::string& origin = "<config>");

/// Renders a Config back to `key=value` text (format=1 header first).
std::string render_config(const Config& cfg);

std::optional<std::string> find_value(const std::vector<KeyValue>& entries, std::string_view key);

}  // namespace dramv
