#pragma once

// DRAMml frontend: text -> NetSpec and back.
//
// Grammar (informal):
//
//   document   := [ 'standard' IDENT ';' ] body
//   body       := { block | hierarchy }
//   hierarchy  := IDENT ':' IDENT '{' body '}'        // <count_param> : <name>
//   block      := 'Timings' '{' { IDENT ';' } '}'
//               | 'Places' '{' { IDENT { annotation } ';' } '}'
//               | 'Transitions' '{' { IDENT ';' } '}'
//               | 'Arcs' '{' { arc } '}'
//   annotation := 'capacity' '(' INT ')' | 'lifetime' '(' IDENT ')' | 'init' '(' INT ')'
//   arc        := IDENT op IDENT [ '(' IDENT ')' ] [ '@' qualifier ] ';'
//   op         := '->' | '-o' | '->>' | '-<>'
//   qualifier  := ('same' | 'sibling') [ '(' IDENT ')' ] | 'all'
//
// `//` starts a line comment. The scope qualifier and the place annotations
// are extensions over the published language fragments.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dramv/error.hpp"

namespace dramv {

/// Index into NetSpec::hierarchies; kRoot denotes the top level.
using NodeId = std::int32_t;
inline constexpr NodeId kRoot = -1;

enum class ArcKind { P2T, T2P, Inhibitor, Reset, Timing };

enum class ScopeKind { Same, Sibling, All };

struct ScopeQualifier {
  ScopeKind kind = ScopeKind::Same;
  /// Hierarchy name the qualifier applies to; empty = deepest shared level.
  std::string level;

  bool is_default() const { return kind == ScopeKind::Same && level.empty(); }
  friend bool operator==(const ScopeQualifier&, const ScopeQualifier&) = default;
  friend auto operator<=>(const ScopeQualifier&, const ScopeQualifier&) = default;
};

struct HierarchyDecl {
  std::string name;
  std::string count_param;
  NodeId parent = kRoot;
  SourcePos pos;
};

struct PlaceDecl {
  std::string name;
  NodeId owner = kRoot;
  std::uint32_t capacity = 1;
  std::optional<std::string> lifetime;  // timing parameter name
  std::uint32_t initial_tokens = 0;
  bool explicit_capacity = false;
  SourcePos pos;
};

struct TransitionDecl {
  std::string name;
  NodeId owner = kRoot;
  SourcePos pos;
};

struct ArcDecl {
  ArcKind kind = ArcKind::P2T;
  std::string from;
  std::string to;
  std::optional<std::string> timing_param;
  ScopeQualifier scope;
  SourcePos pos;
};

struct TimingDecl {
  std::string name;
  SourcePos pos;
};

struct NetSpec {
  std::string standard_name;
  std::vector<HierarchyDecl> hierarchies;  // parents precede children
  std::vector<PlaceDecl> places;
  std::vector<TransitionDecl> transitions;
  std::vector<ArcDecl> arcs;
  std::vector<TimingDecl> timing_params;

  const PlaceDecl* find_place(std::string_view name) const;
  const TransitionDecl* find_transition(std::string_view name) const;
  std::optional<NodeId> find_hierarchy(std::string_view name) const;

  /// Hierarchy path from the top level down to `node` (empty for kRoot).
  std::vector<NodeId> path_to(NodeId node) const;
  std::size_t depth(NodeId node) const { return path_to(node).size(); }
};

enum class ParseMode {
  Strict,      // full semantic validation
  SyntaxOnly,  // grammar only; undeclared names are accepted
};

/// Parses DRAMml text. Throws ParseError listing every diagnostic.
NetSpec parse(std::string_view source, ParseMode mode = ParseMode::Strict,
              std::string origin = "<input>");

/// Semantic checks on an already-built spec; returns diagnostics in order.
std::vector<Diagnostic> validate(const NetSpec& spec);

/// Renders a NetSpec as DRAMml text that parses back to an equal spec.
std::string render(const NetSpec& spec);

/// Equality up to declaration order and source positions.
bool structurally_equal(const NetSpec& a, const NetSpec& b);

std::string_view arc_operator(ArcKind kind);
std::string_view arc_kind_name(ArcKind kind);
std::string scope_suffix(const ScopeQualifier& scope);  // "@sibling(bankgroup)", "" for default

}  // namespace dramv
