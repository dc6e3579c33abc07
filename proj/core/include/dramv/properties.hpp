#pragma once

// Property derivation from an elaborated net and SystemVerilog Assertion
// rendering.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dramv/config.hpp"
#include "dramv/petri.hpp"
#include "dramv/topology.hpp"

namespace dramv {

enum class PropertyKind { Arc, Inhibitor, Timing, Window };

std::string_view property_kind_name(PropertyKind kind);

/// Comparison of one command coordinate field against the enclosing
/// generate index of the same hierarchy.
struct CoordTest {
  NodeId level = kRoot;
  bool equal = true;  // cmd_<level> == <level>_id, else !=

  friend bool operator==(const CoordTest&, const CoordTest&) = default;
};

/// `cmd == <command> && <tests...>`
struct CommandMatch {
  std::string command;
  NodeId owner = kRoot;  // hierarchy owning the command
  std::vector<CoordTest> tests;

  friend bool operator==(const CommandMatch&, const CommandMatch&) = default;
};

/// State-update logic of one place, per enclosing generate instance.
struct PlaceRule {
  std::string place;
  NodeId owner = kRoot;
  std::uint32_t capacity = 1;
  std::uint32_t lifetime = 0;  // 0 = untimed
  std::uint32_t initial_tokens = 0;
  std::vector<CommandMatch> increments;  // T2P arcs (self loops removed)
  std::vector<CommandMatch> decrements;  // P2T arcs (self loops removed)
  std::vector<CommandMatch> resets;
};

struct Property {
  std::string unique_id;
  PropertyKind kind = PropertyKind::Arc;
  /// Generate level the property lives in and its instances (genvar values).
  NodeId scope = kRoot;
  std::vector<Coords> instances;

  /// Arc/Inhibitor/Window: the place the property reads.
  std::string place;
  NodeId place_owner = kRoot;

  /// Arc: antecedent command. Inhibitor: forbidden command. Timing: first
  /// command. Window: unused (see feeders).
  CommandMatch trigger;
  /// Timing: second command.
  CommandMatch target;
  /// Window: commands adding tokens to the timed place.
  std::vector<CommandMatch> feeders;

  std::optional<std::string> timing_param;
  std::uint32_t timing_value = 0;  // Timing
  std::uint32_t window_cycles = 0;  // Window
  std::uint32_t max_count = 0;      // Window
  ScopeQualifier scope_qualifier;

  /// Command kinds the property mentions, sorted and unique.
  std::vector<std::string> commands() const;
  std::size_t generated() const { return instances.size(); }
};

struct PropertySet {
  std::string model;
  Config config;
  Topology topology;
  std::vector<std::string> command_kinds;
  std::vector<NodeId> command_owners;  // parallel to command_kinds
  std::vector<PlaceRule> places;
  std::vector<Property> properties;  // sorted by unique_id

  const Property* find(std::string_view unique_id) const;
};

/// Derives one property per P2T, inhibitor and timing arc and one window
/// property per timed place. Throws Error on a timing value below 1.
PropertySet derive(const ElaboratedNet& net);

struct CountSummary {
  std::size_t generated = 0;
  std::size_t unique = 0;
};

CountSummary count_summary(const PropertySet& props);

/// Port names of the bindable wrapper module.
struct SignalMap {
  std::string module_name;  // empty: derived from model and config name
  std::string clock = "clk";
  std::string reset = "reset";
  std::string command = "cmd";
  std::map<std::string, std::string> coordinate;  // hierarchy name -> port; default cmd_<name>
  std::uint32_t command_width = 0;               // 0: derived from command count

  std::string coordinate_port(const std::string& hierarchy) const;
};

/// Reads `key=value` lines: module, clock, reset, command, command_width,
/// coord.<hierarchy>=<port>.
SignalMap parse_signal_map(std::string_view text, const std::string& origin = "<signal map>");

/// Renders the property set as a SystemVerilog module of generate loops,
/// place state logic, properties and assertions. Deterministic.
std::string emit_sva(const PropertySet& props, const SignalMap& signals = {});

/// Copy of `props` with every timing property's value increased by `extra`.
PropertySet with_timing_increment(const PropertySet& props, std::uint32_t extra);

}  // namespace dramv
