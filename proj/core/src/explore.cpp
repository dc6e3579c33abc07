#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

#include "dramv/petri.hpp"

namespace dramv {

namespace {

// Abstract marking: token counts (untimed places), remaining lifetimes
// (timed places) and clamped ages since the last fire of every transition
// instance. Absolute time is not part of the state.
struct AbstractState {
  std::vector<std::vector<std::uint32_t>> tokens;  // remaining lifetime, or 0 for untimed tokens
  std::vector<std::uint32_t> age;
  bool started = false;

  std::string key() const {
    std::string k;
    k.push_back(started ? '1' : '0');
    auto put = [&](std::uint32_t v) { k.append(reinterpret_cast<const char*>(&v), sizeof v); };
    for (const auto& t : tokens) {
      put(static_cast<std::uint32_t>(t.size()));
      for (auto v : t) put(v);
    }
    for (auto a : age) put(a);
    return k;
  }
};

}  // namespace

ReachabilitySummary explore(const ElaboratedNet& net, Cycle horizon, std::size_t state_bound) {
  const std::uint32_t clamp = net.max_timing();
  ReachabilitySummary summary;
  summary.horizon = horizon;
  for (const auto& t : net.spec.transitions) summary.reachable[t.name] = false;
  std::size_t remaining = summary.reachable.size();

  AbstractState init;
  init.tokens.resize(net.place_instances.size());
  for (std::size_t i = 0; i < net.place_instances.size(); ++i) {
    init.tokens[i].assign(net.spec.places[net.place_instances[i].decl].initial_tokens, 0);
  }
  init.age.assign(net.transition_instances.size(), clamp);

  struct Node {
    AbstractState state;
    Cycle elapsed;
  };
  std::deque<Node> queue;
  std::unordered_set<std::string> seen;
  seen.insert(init.key());
  queue.push_back({std::move(init), 0});

  auto is_timed = [&](std::size_t place_instance) {
    return net.place_lifetime[net.place_instances[place_instance].decl] != 0;
  };

  while (!queue.empty() && remaining > 0) {
    Node node = std::move(queue.front());
    queue.pop_front();
    ++summary.states_explored;
    const AbstractState& s = node.state;

    for (std::size_t t = 0; t < net.transition_instances.size(); ++t) {
      const auto& fan = net.fanout[t];
      bool enabled = true;
      for (std::size_t ai : fan.requires_token) enabled = enabled && !s.tokens[net.arcs[ai].from].empty();
      for (std::size_t ai : fan.inhibited_by) enabled = enabled && s.tokens[net.arcs[ai].from].empty();
      if (!enabled) continue;

      std::uint64_t delay = s.started ? 1 : 0;
      for (std::size_t ai : fan.timing_in) {
        const auto& a = net.arcs[ai];
        if (s.age[a.from] < a.timing) delay = std::max<std::uint64_t>(delay, a.timing - s.age[a.from]);
      }
      for (std::size_t ai : fan.windows) {
        const auto& toks = s.tokens[net.arcs[ai].to];
        std::uint32_t cap = net.spec.places[net.place_instances[net.arcs[ai].to].decl].capacity;
        if (toks.size() >= cap) delay = std::max<std::uint64_t>(delay, toks[toks.size() - cap]);
      }
      if (node.elapsed + delay > horizon) continue;

      AbstractState next = s;
      next.started = true;
      for (auto& a : next.age) a = static_cast<std::uint32_t>(std::min<std::uint64_t>(clamp, a + delay));
      for (std::size_t p = 0; p < next.tokens.size(); ++p) {
        if (!is_timed(p)) continue;
        auto& toks = next.tokens[p];
        std::vector<std::uint32_t> kept;
        for (auto r : toks) {
          if (r > delay) kept.push_back(static_cast<std::uint32_t>(r - delay));
        }
        toks = std::move(kept);
      }
      for (std::size_t ai : fan.consumes) {
        auto& toks = next.tokens[net.arcs[ai].from];
        if (!toks.empty()) toks.erase(toks.begin());
      }
      for (std::size_t ai : fan.resets) next.tokens[net.arcs[ai].from].clear();
      for (std::size_t ai : fan.produces) {
        std::size_t p = net.arcs[ai].to;
        auto& toks = next.tokens[p];
        std::uint32_t cap = net.spec.places[net.place_instances[p].decl].capacity;
        std::uint32_t life = net.place_lifetime[net.place_instances[p].decl];
        if (toks.size() >= cap) toks.erase(toks.begin());
        toks.insert(std::upper_bound(toks.begin(), toks.end(), life), life);
      }
      next.age[t] = 0;

      Cycle at = node.elapsed + delay;
      const std::string& name = net.spec.transitions[net.transition_instances[t].decl].name;
      if (!summary.reachable[name]) {
        summary.reachable[name] = true;
        summary.first_reached[name] = at;
        --remaining;
      } else {
        summary.first_reached[name] = std::min(summary.first_reached[name], at);
      }
      if (seen.insert(next.key()).second) {
        if (seen.size() > state_bound) {
          summary.complete = false;
          return summary;
        }
        queue.push_back({std::move(next), at});
      }
    }
  }
  return summary;
}

}  // namespace dramv
