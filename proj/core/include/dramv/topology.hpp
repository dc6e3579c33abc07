#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dramv/config.hpp"
#include "dramv/dramml.hpp"

namespace dramv {

using Coords = std::vector<std::uint32_t>;

/// Hierarchy tree with bound instance counts. Coordinates of an instance of
/// node N are the indices along the path from the top level down to N.
class Topology {
 public:
  Topology() = default;
  /// Throws Error for an unbound or zero count.
  Topology(const NetSpec& spec, const Config& cfg);

  std::size_t node_count() const { return names_.size(); }
  const std::string& name(NodeId node) const { return names_.at(static_cast<std::size_t>(node)); }
  std::uint32_t count(NodeId node) const { return counts_.at(static_cast<std::size_t>(node)); }
  /// Count parameter name as written in the model (may be a literal).
  const std::string& count_param(NodeId node) const { return params_.at(static_cast<std::size_t>(node)); }
  const std::vector<NodeId>& path(NodeId node) const;
  std::size_t depth(NodeId node) const { return path(node).size(); }

  /// Number of instances of `node` (1 for kRoot).
  std::size_t instance_count(NodeId node) const;
  /// All coordinates of `node` in lexicographic order.
  std::vector<Coords> instances(NodeId node) const;
  bool in_range(NodeId node, std::span<const std::uint32_t> coords) const;
  /// Mixed-radix index of `coords` among the instances of `node`.
  std::size_t flat_index(NodeId node, std::span<const std::uint32_t> coords) const;

  /// Number of leading hierarchy nodes the two paths share.
  std::size_t shared_depth(NodeId a, NodeId b) const;
  /// Position of `level` on the path of `node`, or npos.
  std::size_t level_position(NodeId node, NodeId level) const;

  /// "rank 0 / bankgroup 2 / bank 1"; "channel" for the top level.
  std::string describe(NodeId node, std::span<const std::uint32_t> coords) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::string> params_;
  std::vector<std::vector<NodeId>> paths_;
  std::vector<NodeId> root_path_;
};

}  // namespace dramv
