#pragma once

// Command traces and property evaluation over them.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dramv/config.hpp"
#include "dramv/petri.hpp"
#include "dramv/properties.hpp"

namespace dramv {

struct TraceRecord {
  Command command;
  std::size_t line = 0;
};

struct CommandTrace {
  std::string origin;
  std::vector<KeyValue> header;
  std::vector<TraceRecord> records;

  std::vector<Command> commands() const;
};

/// Parses the trace text format:
///
///   # comment
///   format=1
///   standard=DDR4
///   ranks=1
///   <cycle> <CMD> [<coord> ...]
///
/// Coordinates are validated against `props` (command kind known, one index
/// per enclosing hierarchy, each in range); cycles must strictly increase.
/// Throws ParseError listing every bad line.
CommandTrace load_trace(std::string_view text, const PropertySet& props, const std::string& origin = "<trace>");

/// Renders commands (and an optional header) in the trace format.
std::string render_trace(const std::vector<Command>& commands, const std::vector<KeyValue>& header = {});

enum class Status { Holds, Violated, NotActivated };

std::string_view status_name(Status s);

struct Witness {
  std::size_t trace = 0;   // index into the checked corpus
  std::size_t record = 0;  // index into the trace
  std::size_t line = 0;
  Command command;
  Coords instance;  // generate indices of the violated instance
  std::string constraint;
};

struct PropertyVerdict {
  std::string unique_id;
  PropertyKind kind = PropertyKind::Arc;
  Status status = Status::NotActivated;
  std::vector<std::string> commands;
  ScopeQualifier scope;
  std::size_t generated = 0;
  std::size_t activations = 0;
  std::size_t violations = 0;
  std::optional<Witness> witness;
  std::uint32_t timing_value = 0;
  std::optional<std::string> timing_param;
  std::optional<Cycle> min_gap;      // TIMING only
  std::optional<std::int64_t> slack;  // min_gap - timing_value
};

struct VerdictReport {
  std::string model;
  std::string config_name;
  std::vector<std::string> command_kinds;
  std::size_t traces = 0;
  std::size_t records = 0;
  std::vector<PropertyVerdict> verdicts;  // ordered by unique_id
  /// Per checked trace: indices of records that violated at least one property.
  std::vector<std::vector<std::size_t>> violating_records;

  std::size_t count(Status s) const;
  const PropertyVerdict* find(std::string_view unique_id) const;
};

/// Evaluates every property over `trace` from reset. Throws Error if the
/// trace header disagrees with the property set's configuration.
VerdictReport check(const PropertySet& props, const CommandTrace& trace);

/// Evaluates each trace independently from reset and merges the results.
/// `workers` > 1 evaluates traces concurrently; the report is identical.
VerdictReport check(const PropertySet& props, std::span<const CommandTrace> corpus, unsigned workers = 1);

struct FeatureCoverageSummary {
  std::map<std::string, std::size_t> activations;             // per command kind
  std::map<std::string, std::vector<std::string>> not_activated;  // command kind -> property ids
  std::vector<std::string> unexercised;                       // model order
};

FeatureCoverageSummary coverage(const VerdictReport& report);

}  // namespace dramv
