#include "dramv/models.hpp"

#include <fmt/format.h>

#include <charconv>

#include "bundled_sources.hpp"

namespace dramv {

TimingPreset parse_preset(std::string_view text, const std::string& origin) {
  TimingPreset p;
  std::vector<Diagnostic> diags;
  auto entries = parse_key_values(text, origin);
  for (const auto& kv : entries) {
    SourcePos pos{kv.line, 1};
    if (kv.key == "format") {
      if (kv.value != "1") diags.push_back({pos, fmt::format("unsupported format '{}'", kv.value)});
    } else if (kv.key == "preset") {
      p.name = kv.value;
    } else if (kv.key == "standard") {
      p.standard_name = kv.value;
    } else if (kv.key.starts_with("note.")) {
      p.notes[kv.key.substr(5)] = kv.value;
    } else {
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), v);
      if (ec != std::errc{} || ptr != kv.value.data() + kv.value.size() || v == 0) {
        diags.push_back({pos, fmt::format("'{}' is not a positive cycle count", kv.value)});
      } else {
        p.values[kv.key] = v;
      }
    }
  }
  for (const auto& kv : entries) {
    if (p.values.contains(kv.key) && !p.notes.contains(kv.key)) {
      diags.push_back({{kv.line, 1}, fmt::format("timing '{}' has no provenance note", kv.key)});
    }
  }
  for (const auto& [k, note] : p.notes) {
    if (!p.values.contains(k)) diags.push_back({{1, 1}, fmt::format("note for unknown timing '{}'", k)});
  }
  if (p.name.empty()) diags.push_back({{1, 1}, "missing 'preset' name"});
  if (!diags.empty()) throw ParseError(origin, std::move(diags));
  return p;
}

const std::vector<TimingPreset>& bundled_presets() {
  static const std::vector<TimingPreset> presets = [] {
    std::vector<TimingPreset> out;
    for (const auto& f : bundled::files) {
      if (std::string_view(f.name).ends_with(".preset")) out.push_back(parse_preset(f.text, std::string(f.name)));
    }
    return out;
  }();
  return presets;
}

const TimingPreset* find_preset(std::string_view name) {
  for (const auto& p : bundled_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

std::string_view file_text(std::string_view name) {
  for (const auto& f : bundled::files) {
    if (f.name == name) return f.text;
  }
  throw Error(fmt::format("bundled file '{}' missing", name));
}

}  // namespace

const std::vector<ModelBundle>& bundled_models() {
  static const std::vector<ModelBundle> models = [] {
    std::vector<ModelBundle> out;
    ModelBundle ddr4;
    ddr4.name = "ddr4";
    ddr4.file = "ddr4.dramml";
    ddr4.source = file_text(ddr4.file);
    ddr4.configs["16bank"] = file_text("ddr4-16bank.cfg");
    ddr4.configs["8bank"] = file_text("ddr4-8bank.cfg");
    ddr4.presets = {"ddr4-3200-example"};
    out.push_back(std::move(ddr4));

    ModelBundle ddr5;
    ddr5.name = "ddr5-delta";
    ddr5.file = "ddr5_delta.dramml";
    ddr5.source = file_text(ddr5.file);
    ddr5.configs["16bank"] = file_text("ddr5-16bank.cfg");
    ddr5.configs["8bank"] = file_text("ddr5-8bank.cfg");
    ddr5.presets = {"ddr5-4800-example"};
    ddr5.renames.commands = {{"REFab", "REFA"}, {"PREab", "PREA"}};
    out.push_back(std::move(ddr5));
    return out;
  }();
  return models;
}

const ModelBundle* find_bundled_model(std::string_view name) {
  for (const auto& m : bundled_models()) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

Config load_config(const NetSpec& spec, std::string_view text, const std::string& origin) {
  auto entries = parse_key_values(text, origin);
  const TimingPreset* preset = nullptr;
  if (auto name = find_value(entries, "preset")) {
    preset = find_preset(*name);
    if (!preset) {
      std::size_t line = 0;
      for (const auto& kv : entries) {
        if (kv.key == "preset") line = kv.line;
      }
      throw ParseError(origin, {{{line, 1}, fmt::format("unknown timing preset '{}'", *name)}});
    }
  } else {
    for (const auto& p : bundled_presets()) {
      if (p.standard_name == spec.standard_name) {
        preset = &p;
        break;
      }
    }
  }
  return make_config(spec, entries, preset ? preset->values : std::map<std::string, std::uint32_t>{}, origin);
}

}  // namespace dramv
