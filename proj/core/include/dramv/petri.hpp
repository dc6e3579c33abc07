#pragma once

// Timed Petri net core: elaboration of a NetSpec into per-instance places,
// transitions and arcs, and cycle-accurate execution used as the legality
// oracle for command traces.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dramv/config.hpp"
#include "dramv/dramml.hpp"
#include "dramv/topology.hpp"

namespace dramv {

using Cycle = std::uint64_t;
inline constexpr Cycle kNoExpiry = std::numeric_limits<Cycle>::max();

struct Command {
  Cycle cycle = 0;
  std::string kind;
  Coords coords;

  friend bool operator==(const Command&, const Command&) = default;
};

struct Scope {
  NodeId node = kRoot;
  Coords coords;
};

struct PlaceInstance {
  std::size_t decl = 0;  // index into NetSpec::places
  Coords coords;
};

struct TransitionInstance {
  std::size_t decl = 0;  // index into NetSpec::transitions
  Coords coords;
};

/// Concrete arc between instances. For place arcs `from`/`to` index
/// place_instances or transition_instances according to kind; timing arcs
/// index transition_instances on both ends.
struct ExpandedArc {
  ArcKind kind = ArcKind::P2T;
  std::size_t from = 0;
  std::size_t to = 0;
  std::uint32_t timing = 0;
  std::size_t decl = 0;  // index into NetSpec::arcs
};

class ElaboratedNet {
 public:
  NetSpec spec;
  Config config;
  Topology topology;

  std::vector<Scope> instances;  // every scope, ordered by hierarchy path then index
  std::vector<PlaceInstance> place_instances;
  std::vector<TransitionInstance> transition_instances;
  std::vector<ExpandedArc> arcs;

  /// Resolved per place declaration.
  std::vector<std::uint32_t> place_lifetime;  // 0 = untimed
  std::vector<std::size_t> place_first_instance;
  std::vector<std::size_t> transition_first_instance;

  /// Per transition instance: indices into `arcs`, grouped by role.
  struct Fanout {
    std::vector<std::size_t> requires_token;   // P2T
    std::vector<std::size_t> inhibited_by;     // INHIBITOR
    std::vector<std::size_t> timing_in;        // TIMING arcs ending here
    std::vector<std::size_t> consumes;         // P2T without matching T2P
    std::vector<std::size_t> produces;         // T2P without matching P2T
    std::vector<std::size_t> resets;           // RESET
    std::vector<std::size_t> windows;          // T2P into timed places
  };
  std::vector<Fanout> fanout;

  std::optional<std::size_t> transition_decl(std::string_view name) const;
  /// Instance index for a command; throws Error on unknown kind or bad coordinates.
  std::size_t resolve(const Command& cmd) const;
  std::string describe_place(std::size_t place_instance) const;
  std::string describe_transition(std::size_t transition_instance) const;
  std::uint32_t max_timing() const;

 private:
  friend ElaboratedNet elaborate(const NetSpec&, const Config&);
  std::unordered_map<std::string, std::size_t> transition_index_;
};

/// Expands hierarchy counts and resolves timing values. Throws Error on an
/// unbound hierarchy count, an unbound timing parameter or a zero value.
ElaboratedNet elaborate(const NetSpec& spec, const Config& cfg);

struct MarkingState {
  Cycle cycle = 0;
  bool started = false;
  /// Expiry cycle per token (kNoExpiry for untimed), sorted ascending, per place instance.
  std::vector<std::vector<Cycle>> tokens;
  /// Last fire cycle per transition instance.
  std::vector<std::optional<Cycle>> last_fire;

  std::size_t token_count(std::size_t place_instance) const;
  friend bool operator==(const MarkingState&, const MarkingState&) = default;
};

/// Post-reset marking: initial tokens only, no timing history.
MarkingState initial_state(const ElaboratedNet& net);

enum class ViolationKind { MissingToken, Inhibited, Timing, Window };

struct Violation {
  ViolationKind kind = ViolationKind::MissingToken;
  std::size_t arc = 0;  // index into ElaboratedNet::arcs
  std::string message;
};

struct LegalityVerdict {
  Command command;
  std::vector<Violation> violations;

  bool legal() const { return violations.empty(); }
};

/// Checks `cmd` against `state` without firing it.
LegalityVerdict legality(const ElaboratedNet& net, const MarkingState& state, const Command& cmd);

/// Fires `cmd` on `state` in place. Violations are reported and the firing
/// effects are applied anyway.
LegalityVerdict step(const ElaboratedNet& net, MarkingState& state, const Command& cmd);

/// Value-semantics variant of step.
std::pair<MarkingState, LegalityVerdict> step(const ElaboratedNet& net, const MarkingState& state,
                                              const Command& cmd);

/// Folds step over `commands` from the initial marking.
std::vector<LegalityVerdict> run(const ElaboratedNet& net, const std::vector<Command>& commands);

struct ReachabilitySummary {
  std::map<std::string, bool> reachable;        // per transition name
  std::map<std::string, Cycle> first_reached;   // earliest cycle found
  std::size_t states_explored = 0;
  Cycle horizon = 0;
  bool complete = true;  // false when the state bound stopped the search
};

/// Breadth-first search over abstract markings in which each step fires one
/// transition instance at its earliest legal delay.
ReachabilitySummary explore(const ElaboratedNet& net, Cycle horizon, std::size_t state_bound);

}  // namespace dramv
