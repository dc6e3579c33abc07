#pragma once

// Slack sweep over timing properties and diffs between two standards.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dramv/properties.hpp"
#include "dramv/trace.hpp"

namespace dramv {

struct SlackEntry {
  std::string unique_id;
  std::optional<std::string> timing_param;
  std::uint32_t timing_value = 0;
  Cycle min_gap = 0;
  /// Largest increment the property survives: clamp(min_gap - t, 0, k_max).
  std::uint32_t k = 0;
  bool candidate = false;  // k >= 1
  /// t / min_gap: share of the observed gap the constraint actually needs.
  double utilization = 0.0;
};

struct SlackSweepResult {
  std::uint32_t k_max = 0;
  /// Activated timing properties, ordered by unique_id.
  std::vector<SlackEntry> entries;
  /// survivors[i]: properties still holding with every timing value raised by i, i in [0, k_max + 1].
  std::vector<std::size_t> survivors;
  /// Smallest increment at which no entry holds (max k + 1); empty if none
  /// activated or some entry still holds at k_max + 1.
  std::optional<std::uint32_t> all_violated_at;
  std::size_t not_activated = 0;
};

/// Analytic sweep from the observed minimum gaps in `report`.
SlackSweepResult slack_sweep(const VerdictReport& report, std::uint32_t k_max);

/// Same result computed by re-checking the corpus at every increment.
SlackSweepResult slack_sweep_rerun(const PropertySet& props, std::span<const CommandTrace> corpus,
                                   std::uint32_t k_max, unsigned workers = 1);

/// Maps command names of the newer standard onto the older one (REFab -> REFA).
struct RenameTable {
  std::map<std::string, std::string> commands;

  std::string canonical(const std::string& name) const;
};

struct DiffEntry {
  std::string key;
  std::string old_id;  // empty when absent
  std::string new_id;
  std::set<std::string> commands;  // renamed command kinds of either side
  std::optional<std::string> old_param, new_param;
  std::optional<std::uint32_t> old_value, new_value;
};

struct UpgradeDiff {
  std::vector<DiffEntry> unchanged;
  std::vector<DiffEntry> timing_changed;
  std::vector<DiffEntry> added;
  std::vector<DiffEntry> removed;
  std::vector<DiffEntry> discarded;  // touches an unsupported command kind
};

/// Canonical, name-independent identity of a property: kind, renamed
/// commands in role order, place and scope qualifier.
std::string property_key(const Property& p, const RenameTable& renames = {});

/// Matches properties of `older` and `newer` by property_key. Properties that
/// mention a command in `unsupported` (after renaming) are discarded on both
/// sides before matching.
UpgradeDiff upgrade_diff(const PropertySet& older, const PropertySet& newer, const RenameTable& renames = {},
                         const std::set<std::string>& unsupported = {});

std::string render_diff_table(const UpgradeDiff& diff);

}  // namespace dramv
