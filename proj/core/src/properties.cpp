#include "dramv/properties.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace dramv {

std::string_view property_kind_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Arc:
      return "ARC";
    case PropertyKind::Inhibitor:
      return "INHIBITOR";
    case PropertyKind::Timing:
      return "TIMING";
    case PropertyKind::Window:
      return "WINDOW";
  }
  return "?";
}

std::vector<std::string> Property::commands() const {
  std::set<std::string> out;
  if (!trigger.command.empty()) out.insert(trigger.command);
  if (!target.command.empty()) out.insert(target.command);
  for (const auto& f : feeders) out.insert(f.command);
  return {out.begin(), out.end()};
}

const Property* PropertySet::find(std::string_view unique_id) const {
  auto it = std::lower_bound(properties.begin(), properties.end(), unique_id,
                             [](const Property& p, std::string_view id) { return p.unique_id < id; });
  return it != properties.end() && it->unique_id == unique_id ? &*it : nullptr;
}

namespace {

std::vector<CoordTest> equal_prefix(const Topology& topo, NodeId node, std::size_t n) {
  std::vector<CoordTest> tests;
  const auto& path = topo.path(node);
  for (std::size_t i = 0; i < n && i < path.size(); ++i) tests.push_back({path[i], true});
  return tests;
}

/// Number of leading hierarchy levels an arc compares (same/sibling).
std::size_t compared_depth(const NetSpec& spec, const Topology& topo, NodeId a, NodeId b,
                           const ScopeQualifier& scope) {
  if (scope.kind == ScopeKind::All) return 0;
  if (!scope.level.empty()) return topo.level_position(a, *spec.find_hierarchy(scope.level)) + 1;
  return topo.shared_depth(a, b);
}

std::string scope_id_suffix(const ScopeQualifier& scope) {
  if (scope.is_default()) return {};
  switch (scope.kind) {
    case ScopeKind::Same:
      return "_same_" + scope.level;
    case ScopeKind::Sibling:
      return scope.level.empty() ? "_sibling" : "_sibling_" + scope.level;
    case ScopeKind::All:
      return "_all";
  }
  return {};
}

}  // namespace

PropertySet derive(const ElaboratedNet& net) {
  const NetSpec& spec = net.spec;
  const Topology& topo = net.topology;
  PropertySet set;
  set.model = spec.standard_name;
  set.config = net.config;
  set.topology = topo;
  for (const auto& t : spec.transitions) {
    set.command_kinds.push_back(t.name);
    set.command_owners.push_back(t.owner);
  }

  auto owner_of_transition = [&](const std::string& name) { return spec.find_transition(name)->owner; };

  std::set<std::pair<std::string, std::string>> p2t, t2p;  // (place, transition)
  for (const auto& a : spec.arcs) {
    if (a.kind == ArcKind::P2T) p2t.insert({a.from, a.to});
    if (a.kind == ArcKind::T2P) t2p.insert({a.to, a.from});
  }

  for (std::size_t pi = 0; pi < spec.places.size(); ++pi) {
    const auto& p = spec.places[pi];
    PlaceRule rule{p.name, p.owner, p.capacity, net.place_lifetime[pi], p.initial_tokens, {}, {}, {}};
    for (const auto& a : spec.arcs) {
      bool self_loop = p2t.contains({p.name, a.kind == ArcKind::T2P ? a.from : a.to}) &&
                       t2p.contains({p.name, a.kind == ArcKind::T2P ? a.from : a.to});
      if (a.kind == ArcKind::T2P && a.to == p.name && !self_loop) {
        NodeId t = owner_of_transition(a.from);
        rule.increments.push_back({a.from, t, equal_prefix(topo, t, topo.shared_depth(t, p.owner))});
      } else if (a.kind == ArcKind::P2T && a.from == p.name && !self_loop) {
        NodeId t = owner_of_transition(a.to);
        rule.decrements.push_back({a.to, t, equal_prefix(topo, t, topo.shared_depth(t, p.owner))});
      } else if (a.kind == ArcKind::Reset && a.from == p.name) {
        NodeId t = owner_of_transition(a.to);
        std::size_t n = compared_depth(spec, topo, p.owner, t, a.scope);
        rule.resets.push_back({a.to, t, equal_prefix(topo, t, n)});
      }
    }
    set.places.push_back(std::move(rule));
  }

  std::map<std::string, int> id_uses;
  auto unique = [&](std::string id) {
    int n = ++id_uses[id];
    return n == 1 ? id : fmt::format("{}_{}", id, n);
  };

  for (const auto& a : spec.arcs) {
    if (a.kind == ArcKind::P2T || a.kind == ArcKind::Inhibitor) {
      const PlaceDecl* place = spec.find_place(a.from);
      NodeId t = owner_of_transition(a.to);
      Property prop;
      prop.kind = a.kind == ArcKind::P2T ? PropertyKind::Arc : PropertyKind::Inhibitor;
      prop.unique_id = unique(fmt::format("{}_{}_{}", a.kind == ArcKind::P2T ? "arc" : "inhibitor", a.from, a.to));
      prop.scope = topo.depth(t) >= topo.depth(place->owner) ? t : place->owner;
      prop.place = place->name;
      prop.place_owner = place->owner;
      prop.trigger = {a.to, t, equal_prefix(topo, t, topo.depth(t))};
      set.properties.push_back(std::move(prop));
    } else if (a.kind == ArcKind::Timing) {
      NodeId from = owner_of_transition(a.from);
      NodeId to = owner_of_transition(a.to);
      std::size_t h = compared_depth(spec, topo, from, to, a.scope);
      Property prop;
      prop.kind = PropertyKind::Timing;
      prop.unique_id = unique(fmt::format("timing_{}_{}{}", a.from, a.to, scope_id_suffix(a.scope)));
      prop.scope = h == 0 ? kRoot : topo.path(from)[h - 1];
      prop.trigger = {a.from, from, equal_prefix(topo, from, h)};
      prop.target = {a.to, to, equal_prefix(topo, to, h)};
      if (a.scope.kind == ScopeKind::Sibling) prop.target.tests.back().equal = false;
      prop.timing_param = a.timing_param;
      prop.timing_value = net.config.timing_values.at(*a.timing_param);
      if (prop.timing_value < 1) throw Error(fmt::format("timing value of {} below 1", *a.timing_param));
      prop.scope_qualifier = a.scope;
      set.properties.push_back(std::move(prop));
    }
  }
  for (std::size_t pi = 0; pi < spec.places.size(); ++pi) {
    const auto& rule = set.places[pi];
    if (rule.lifetime == 0) continue;
    Property prop;
    prop.kind = PropertyKind::Window;
    prop.unique_id = unique("window_" + rule.place);
    prop.scope = rule.owner;
    prop.place = rule.place;
    prop.place_owner = rule.owner;
    prop.feeders = rule.increments;
    prop.timing_param = spec.places[pi].lifetime;
    prop.window_cycles = rule.lifetime;
    prop.max_count = rule.capacity;
    set.properties.push_back(std::move(prop));
  }
  for (auto& prop : set.properties) prop.instances = topo.instances(prop.scope);
  std::sort(set.properties.begin(), set.properties.end(),
            [](const Property& x, const Property& y) { return x.unique_id < y.unique_id; });
  return set;
}

CountSummary count_summary(const PropertySet& props) {
  CountSummary s;
  s.unique = props.properties.size();
  for (const auto& p : props.properties) s.generated += p.generated();
  return s;
}

PropertySet with_timing_increment(const PropertySet& props, std::uint32_t extra) {
  PropertySet out = props;
  for (auto& p : out.properties) {
    if (p.kind == PropertyKind::Timing) p.timing_value += extra;
  }
  return out;
}

}  // namespace dramv
