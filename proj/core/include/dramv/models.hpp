#pragma once

// Bundled DDR4/DDR5 models, hierarchy configs and example timing presets.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dramv/analysis.hpp"
#include "dramv/config.hpp"
#include "dramv/dramml.hpp"

namespace dramv {

struct TimingPreset {
  std::string name;
  std::string standard_name;
  std::map<std::string, std::uint32_t> values;
  std::map<std::string, std::string> notes;  // provenance per value
};

/// Reads a preset file: `tX=<cycles>` plus `note.tX=<text>` for every value.
TimingPreset parse_preset(std::string_view text, const std::string& origin = "<preset>");

struct ModelBundle {
  std::string name;  // "ddr4", "ddr5-delta"
  std::string file;  // file name it was built from
  std::string source;
  std::map<std::string, std::string> configs;  // "16bank" -> config text
  std::vector<std::string> presets;
  /// Command names of this model mapped onto DDR4 names.
  RenameTable renames;
};

const std::vector<ModelBundle>& bundled_models();
const ModelBundle* find_bundled_model(std::string_view name);

const std::vector<TimingPreset>& bundled_presets();
const TimingPreset* find_preset(std::string_view name);

/// Builds a Config from config-file text. A `preset` key supplies base timing
/// values; without one the first bundled preset for the NetSpec's standard is
/// used. Explicit timing keys override the preset.
Config load_config(const NetSpec& spec, std::string_view text, const std::string& origin = "<config>");

}  // namespace dramv
