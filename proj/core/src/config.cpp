#include "dramv/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <set>

namespace dramv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& origin) {
  std::vector<KeyValue> out;
  std::vector<Diagnostic> diags;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diags.push_back({{line_no, 1}, fmt::format("expected key=value, found '{}'", line)});
      continue;
    }
    KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (kv.key.empty()) {
      diags.push_back({{line_no, 1}, "empty key"});
      continue;
    }
    if (!seen.insert(kv.key).second) {
      diags.push_back({{line_no, 1}, fmt::format("duplicate key '{}'", kv.key)});
      continue;
    }
    out.push_back(std::move(kv));
  }
  if (!diags.empty()) throw ParseError(origin, std::move(diags));
  return out;
}

std::optional<std::string> find_value(const std::vector<KeyValue>& entries, std::string_view key) {
  for (const auto& kv : entries) {
    if (kv.key == key) return kv.value;
  }
  return std::nullopt;
}

Config make_config(const NetSpec& spec, const std::vector<KeyValue>& entries,
                   const std::map<std::string, std::uint32_t>& base_timings, const std::string& origin) {
  Config cfg;
  cfg.standard_name = spec.standard_name;
  std::set<std::string> counts, timings;
  for (const auto& h : spec.hierarchies) counts.insert(h.count_param);
  for (const auto& t : spec.timing_params) timings.insert(t.name);
  for (const auto& [k, v] : base_timings) {
    if (timings.contains(k)) cfg.timing_values[k] = v;
  }

  std::vector<Diagnostic> diags;
  for (const auto& kv : entries) {
    SourcePos pos{kv.line, 1};
    if (kv.key == "format") {
      if (kv.value != "1") diags.push_back({pos, fmt::format("unsupported format '{}'", kv.value)});
      continue;
    }
    if (kv.key == "standard") {
      if (!spec.standard_name.empty() && kv.value != spec.standard_name) {
        diags.push_back({pos, fmt::format("config is for standard '{}', model is '{}'", kv.value,
                                          spec.standard_name)});
      }
      continue;
    }
    if (kv.key == "name") {
      cfg.name = kv.value;
      continue;
    }
    if (kv.key == "preset") continue;
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), value);
    if (ec != std::errc{} || ptr != kv.value.data() + kv.value.size()) {
      diags.push_back({pos, fmt::format("'{}' is not a non-negative integer", kv.value)});
      continue;
    }
    if (value == 0) {
      diags.push_back({pos, fmt::format("'{}' must be at least 1", kv.key)});
      continue;
    }
    if (counts.contains(kv.key)) {
      cfg.instance_counts[kv.key] = value;
    } else if (timings.contains(kv.key)) {
      cfg.timing_values[kv.key] = value;
    } else {
      diags.push_back({pos, fmt::format("unknown key '{}'", kv.key)});
    }
  }
  if (!diags.empty()) throw ParseError(origin, std::move(diags));
  return cfg;
}

std::string render_config(const Config& cfg) {
  std::string out = "format=1\n";
  if (!cfg.standard_name.empty()) out += "standard=" + cfg.standard_name + "\n";
  if (!cfg.name.empty()) out += "name=" + cfg.name + "\n";
  for (const auto& [k, v] : cfg.instance_counts) out += fmt::format("{}={}\n", k, v);
  for (const auto& [k, v] : cfg.timing_values) out += fmt::format("{}={}\n", k, v);
  return out;
}

}  // namespace dramv
