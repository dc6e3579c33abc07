#include "dramv/petri.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace dramv {

namespace {

/// Whether two endpoint instances are connected under `scope`.
bool related(const Topology& topo, const NetSpec& spec, NodeId a, const Coords& ca, NodeId b,
             const Coords& cb, const ScopeQualifier& scope) {
  if (scope.kind == ScopeKind::All) return true;
  std::size_t h = topo.shared_depth(a, b);
  if (!scope.level.empty()) {
    NodeId level = *spec.find_hierarchy(scope.level);
    h = topo.level_position(a, level) + 1;
  }
  if (scope.kind == ScopeKind::Same) {
    return std::equal(ca.begin(), ca.begin() + static_cast<std::ptrdiff_t>(h), cb.begin());
  }
  if (h == 0) return false;
  return std::equal(ca.begin(), ca.begin() + static_cast<std::ptrdiff_t>(h - 1), cb.begin()) &&
         ca[h - 1] != cb[h - 1];
}

}  // namespace

std::optional<std::size_t> ElaboratedNet::transition_decl(std::string_view name) const {
  auto it = transition_index_.find(std::string(name));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ElaboratedNet::resolve(const Command& cmd) const {
  auto decl = transition_decl(cmd.kind);
  if (!decl) throw Error(fmt::format("command kind '{}' unknown to model {}", cmd.kind, spec.standard_name));
  NodeId owner = spec.transitions[*decl].owner;
  if (!topology.in_range(owner, cmd.coords)) {
    throw Error(fmt::format("coordinates of {} at cycle {} out of range (expected {} indices)", cmd.kind,
                            cmd.cycle, topology.depth(owner)));
  }
  return transition_first_instance[*decl] + topology.flat_index(owner, cmd.coords);
}

std::string ElaboratedNet::describe_place(std::size_t i) const {
  const auto& pi = place_instances[i];
  const auto& decl = spec.places[pi.decl];
  return fmt::format("{}[{}]", decl.name, topology.describe(decl.owner, pi.coords));
}

std::string ElaboratedNet::describe_transition(std::size_t i) const {
  const auto& ti = transition_instances[i];
  const auto& decl = spec.transitions[ti.decl];
  return fmt::format("{}[{}]", decl.name, topology.describe(decl.owner, ti.coords));
}

std::uint32_t ElaboratedNet::max_timing() const {
  std::uint32_t m = 1;
  for (const auto& a : arcs) m = std::max(m, a.timing);
  for (auto l : place_lifetime) m = std::max(m, l);
  return m;
}

ElaboratedNet elaborate(const NetSpec& spec, const Config& cfg) {
  ElaboratedNet net;
  net.spec = spec;
  net.config = cfg;
  net.topology = Topology(spec, cfg);
  const Topology& topo = net.topology;

  auto timing_value = [&](const std::string& name) {
    auto it = cfg.timing_values.find(name);
    if (it == cfg.timing_values.end()) throw Error(fmt::format("unbound timing parameter '{}'", name));
    if (it->second == 0) throw Error(fmt::format("timing parameter '{}' must be at least 1", name));
    return it->second;
  };

  net.instances.push_back({kRoot, {}});
  for (std::size_t n = 0; n < spec.hierarchies.size(); ++n) {
    for (auto& c : topo.instances(static_cast<NodeId>(n))) net.instances.push_back({static_cast<NodeId>(n), c});
  }

  for (std::size_t p = 0; p < spec.places.size(); ++p) {
    const auto& decl = spec.places[p];
    net.place_first_instance.push_back(net.place_instances.size());
    net.place_lifetime.push_back(decl.lifetime ? timing_value(*decl.lifetime) : 0);
    for (auto& c : topo.instances(decl.owner)) net.place_instances.push_back({p, c});
  }
  for (std::size_t t = 0; t < spec.transitions.size(); ++t) {
    const auto& decl = spec.transitions[t];
    net.transition_index_.emplace(decl.name, t);
    net.transition_first_instance.push_back(net.transition_instances.size());
    for (auto& c : topo.instances(decl.owner)) net.transition_instances.push_back({t, c});
  }

  auto place_range = [&](const std::string& name) {
    auto it = std::find_if(spec.places.begin(), spec.places.end(), [&](auto& p) { return p.name == name; });
    auto d = static_cast<std::size_t>(it - spec.places.begin());
    return std::pair{d, topo.instance_count(it->owner)};
  };
  auto trans_range = [&](const std::string& name) {
    std::size_t d = net.transition_index_.at(name);
    return std::pair{d, topo.instance_count(spec.transitions[d].owner)};
  };

  for (std::size_t ai = 0; ai < spec.arcs.size(); ++ai) {
    const auto& a = spec.arcs[ai];
    bool from_is_place = a.kind == ArcKind::P2T || a.kind == ArcKind::Inhibitor || a.kind == ArcKind::Reset;
    bool to_is_place = a.kind == ArcKind::T2P;
    auto [fd, fn] = from_is_place ? place_range(a.from) : trans_range(a.from);
    auto [td, tn] = to_is_place ? place_range(a.to) : trans_range(a.to);
    std::size_t f0 = from_is_place ? net.place_first_instance[fd] : net.transition_first_instance[fd];
    std::size_t t0 = to_is_place ? net.place_first_instance[td] : net.transition_first_instance[td];
    NodeId fnode = from_is_place ? spec.places[fd].owner : spec.transitions[fd].owner;
    NodeId tnode = to_is_place ? spec.places[td].owner : spec.transitions[td].owner;
    std::uint32_t value = a.kind == ArcKind::Timing ? timing_value(*a.timing_param) : 0;
    for (std::size_t i = 0; i < fn; ++i) {
      const Coords& fc = from_is_place ? net.place_instances[f0 + i].coords : net.transition_instances[f0 + i].coords;
      for (std::size_t j = 0; j < tn; ++j) {
        const Coords& tc = to_is_place ? net.place_instances[t0 + j].coords : net.transition_instances[t0 + j].coords;
        if (related(topo, spec, fnode, fc, tnode, tc, a.scope)) {
          net.arcs.push_back({a.kind, f0 + i, t0 + j, value, ai});
        }
      }
    }
  }

  net.fanout.resize(net.transition_instances.size());
  std::set<std::pair<std::size_t, std::size_t>> p2t_pairs, t2p_pairs;  // (place, transition)
  for (const auto& a : net.arcs) {
    if (a.kind == ArcKind::P2T) p2t_pairs.insert({a.from, a.to});
    if (a.kind == ArcKind::T2P) t2p_pairs.insert({a.to, a.from});
  }
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const auto& a = net.arcs[i];
    switch (a.kind) {
      case ArcKind::P2T:
        net.fanout[a.to].requires_token.push_back(i);
        if (!t2p_pairs.contains({a.from, a.to})) net.fanout[a.to].consumes.push_back(i);
        break;
      case ArcKind::T2P:
        if (!p2t_pairs.contains({a.to, a.from})) net.fanout[a.from].produces.push_back(i);
        if (net.place_lifetime[net.place_instances[a.to].decl] != 0) net.fanout[a.from].windows.push_back(i);
        break;
      case ArcKind::Inhibitor:
        net.fanout[a.to].inhibited_by.push_back(i);
        break;
      case ArcKind::Reset:
        net.fanout[a.to].resets.push_back(i);
        break;
      case ArcKind::Timing:
        net.fanout[a.to].timing_in.push_back(i);
        break;
    }
  }
  return net;
}

std::size_t MarkingState::token_count(std::size_t place_instance) const {
  return tokens[place_instance].size();
}

MarkingState initial_state(const ElaboratedNet& net) {
  MarkingState s;
  s.tokens.resize(net.place_instances.size());
  for (std::size_t i = 0; i < net.place_instances.size(); ++i) {
    s.tokens[i].assign(net.spec.places[net.place_instances[i].decl].initial_tokens, kNoExpiry);
  }
  s.last_fire.assign(net.transition_instances.size(), std::nullopt);
  return s;
}

namespace {

std::size_t live_tokens(const std::vector<Cycle>& toks, Cycle now) {
  return static_cast<std::size_t>(toks.end() - std::upper_bound(toks.begin(), toks.end(), now));
}

}  // namespace

LegalityVerdict legality(const ElaboratedNet& net, const MarkingState& state, const Command& cmd) {
  std::size_t t = net.resolve(cmd);
  const Cycle now = cmd.cycle;
  LegalityVerdict verdict{cmd, {}};
  const auto& fan = net.fanout[t];
  for (std::size_t ai : fan.requires_token) {
    const auto& a = net.arcs[ai];
    if (live_tokens(state.tokens[a.from], now) == 0) {
      verdict.violations.push_back({ViolationKind::MissingToken, ai,
                                    fmt::format("{} requires a token in {}", net.describe_transition(t),
                                                net.describe_place(a.from))});
    }
  }
  for (std::size_t ai : fan.inhibited_by) {
    const auto& a = net.arcs[ai];
    if (live_tokens(state.tokens[a.from], now) != 0) {
      verdict.violations.push_back({ViolationKind::Inhibited, ai,
                                    fmt::format("{} inhibited by token in {}", net.describe_transition(t),
                                                net.describe_place(a.from))});
    }
  }
  for (std::size_t ai : fan.timing_in) {
    const auto& a = net.arcs[ai];
    const auto& last = state.last_fire[a.from];
    if (last && now - *last < a.timing) {
      verdict.violations.push_back(
          {ViolationKind::Timing, ai,
           fmt::format("{} only {} cycles after {} (needs {} for {})", net.describe_transition(t), now - *last,
                       net.describe_transition(a.from), a.timing, *net.spec.arcs[a.decl].timing_param)});
    }
  }
  for (std::size_t ai : fan.windows) {
    const auto& a = net.arcs[ai];
    const auto& decl = net.spec.places[net.place_instances[a.to].decl];
    if (live_tokens(state.tokens[a.to], now) >= decl.capacity) {
      verdict.violations.push_back({ViolationKind::Window, ai,
                                    fmt::format("{} exceeds {} tokens live in {}", net.describe_transition(t),
                                                decl.capacity, net.describe_place(a.to))});
    }
  }
  return verdict;
}

LegalityVerdict step(const ElaboratedNet& net, MarkingState& state, const Command& cmd) {
  std::size_t t = net.resolve(cmd);
  if (state.started && cmd.cycle <= state.cycle) {
    throw Error(fmt::format("command {} at cycle {} does not follow cycle {} (one command per cycle)", cmd.kind,
                            cmd.cycle, state.cycle));
  }
  const Cycle now = cmd.cycle;
  for (auto& toks : state.tokens) {
    auto live = std::upper_bound(toks.begin(), toks.end(), now);
    toks.erase(toks.begin(), live);
  }
  LegalityVerdict verdict = legality(net, state, cmd);
  const auto& fan = net.fanout[t];

  for (std::size_t ai : fan.consumes) {
    auto& toks = state.tokens[net.arcs[ai].from];
    if (!toks.empty()) toks.erase(toks.begin());
  }
  for (std::size_t ai : fan.resets) state.tokens[net.arcs[ai].from].clear();
  for (std::size_t ai : fan.produces) {
    const auto& a = net.arcs[ai];
    auto& toks = state.tokens[a.to];
    std::uint32_t capacity = net.spec.places[net.place_instances[a.to].decl].capacity;
    std::uint32_t lifetime = net.place_lifetime[net.place_instances[a.to].decl];
    if (toks.size() >= capacity) toks.erase(toks.begin());
    Cycle expiry = lifetime == 0 ? kNoExpiry : now + lifetime;
    toks.insert(std::upper_bound(toks.begin(), toks.end(), expiry), expiry);
  }
  state.last_fire[t] = now;
  state.cycle = now;
  state.started = true;
  return verdict;
}

std::pair<MarkingState, LegalityVerdict> step(const ElaboratedNet& net, const MarkingState& state,
                                              const Command& cmd) {
  MarkingState next = state;
  LegalityVerdict v = step(net, next, cmd);
  return {std::move(next), std::move(v)};
}

std::vector<LegalityVerdict> run(const ElaboratedNet& net, const std::vector<Command>& commands) {
  MarkingState state = initial_state(net);
  std::vector<LegalityVerdict> out;
  out.reserve(commands.size());
  for (const auto& cmd : commands) out.push_back(step(net, state, cmd));
  return out;
}

}  // namespace dramv
