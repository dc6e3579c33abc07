#include "dramv/topology.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

namespace dramv {

Topology::Topology(const NetSpec& spec, const Config& cfg) {
  for (std::size_t i = 0; i < spec.hierarchies.size(); ++i) {
    const auto& h = spec.hierarchies[i];
    std::uint32_t value = 0;
    if (!h.count_param.empty() && std::all_of(h.count_param.begin(), h.count_param.end(),
                                              [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      value = static_cast<std::uint32_t>(std::stoul(h.count_param));
    } else {
      auto it = cfg.instance_counts.find(h.count_param);
      if (it == cfg.instance_counts.end()) {
        throw Error(fmt::format("unbound hierarchy count '{}' for hierarchy '{}'", h.count_param, h.name));
      }
      value = it->second;
    }
    if (value == 0) throw Error(fmt::format("zero instance count for hierarchy '{}'", h.name));
    names_.push_back(h.name);
    params_.push_back(h.count_param);
    counts_.push_back(value);
    paths_.push_back(spec.path_to(static_cast<NodeId>(i)));
  }
}

const std::vector<NodeId>& Topology::path(NodeId node) const {
  if (node == kRoot) return root_path_;
  return paths_.at(static_cast<std::size_t>(node));
}

std::size_t Topology::instance_count(NodeId node) const {
  std::size_t n = 1;
  for (NodeId p : path(node)) n *= count(p);
  return n;
}

std::vector<Coords> Topology::instances(NodeId node) const {
  const auto& p = path(node);
  std::vector<Coords> out;
  out.reserve(instance_count(node));
  Coords cur(p.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t k = p.size();
    while (k > 0) {
      --k;
      if (++cur[k] < count(p[k])) break;
      cur[k] = 0;
      if (k == 0) return out;
    }
    if (p.empty()) return out;
  }
}

bool Topology::in_range(NodeId node, std::span<const std::uint32_t> coords) const {
  const auto& p = path(node);
  if (coords.size() != p.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (coords[i] >= count(p[i])) return false;
  }
  return true;
}

std::size_t Topology::flat_index(NodeId node, std::span<const std::uint32_t> coords) const {
  const auto& p = path(node);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < p.size(); ++i) idx = idx * count(p[i]) + coords[i];
  return idx;
}

std::size_t Topology::shared_depth(NodeId a, NodeId b) const {
  const auto& pa = path(a);
  const auto& pb = path(b);
  std::size_t n = 0;
  while (n < pa.size() && n < pb.size() && pa[n] == pb[n]) ++n;
  return n;
}

std::size_t Topology::level_position(NodeId node, NodeId level) const {
  const auto& p = path(node);
  auto it = std::find(p.begin(), p.end(), level);
  return it == p.end() ? std::string::npos : static_cast<std::size_t>(it - p.begin());
}

std::string Topology::describe(NodeId node, std::span<const std::uint32_t> coords) const {
  const auto& p = path(node);
  if (p.empty()) return "channel";
  std::string out;
  for (std::size_t i = 0; i < p.size() && i < coords.size(); ++i) {
    if (!out.empty()) out += " / ";
    out += fmt::format("{} {}", name(p[i]), coords[i]);
  }
  return out;
}

}  // namespace dramv
