#include <doctest.h>

#include <deque>
#include <utility>
#include <random>

#include "dramv/models.hpp"
#include "dramv/petri.hpp"
#include "netgen.hpp"
#include "scheduler.hpp"

using namespace dramv;

namespace {

ElaboratedNet ddr4(std::map<std::string, std::uint32_t> overrides = {}, const std::string& cfg_name = "16bank") {
  const ModelBundle* m = find_bundled_model("ddr4");
  NetSpec spec = parse(m->source);
  Config cfg = load_config(spec, m->configs.at(cfg_name));
  for (const auto& [k, v] : overrides) cfg.timing_values[k] = v;
  return elaborate(spec, cfg);
}

bool has(const LegalityVerdict& v, ViolationKind k) {
  for (const auto& x : v.violations) {
    if (x.kind == k) return true;
  }
  return false;
}

std::size_t place_index(const ElaboratedNet& net, std::string_view name, const Coords& coords) {
  for (std::size_t i = 0; i < net.place_instances.size(); ++i) {
    const auto& p = net.place_instances[i];
    if (net.spec.places[p.decl].name == name && p.coords == coords) return i;
  }
  FAIL("no such place");
  return 0;
}

}  // namespace

TEST_CASE("RD on an active bank is legal") {
  ElaboratedNet net = ddr4();
  MarkingState s = initial_state(net);
  CHECK(step(net, s, {0, "ACT", {0, 0, 0}}).legal());
  CHECK(s.token_count(place_index(net, "ACTIVE", {0, 0, 0})) == 1);
  CHECK(step(net, s, {100, "RD", {0, 0, 0}}).legal());
  CHECK(s.token_count(place_index(net, "ACTIVE", {0, 0, 0})) == 1);  // self loop keeps the row open
}

TEST_CASE("REFA with any active bank violates the inhibitor") {
  ElaboratedNet net = ddr4();
  MarkingState s = initial_state(net);
  step(net, s, {0, "ACT", {0, 3, 2}});
  auto v = step(net, s, {1000, "REFA", {0}});
  CHECK(has(v, ViolationKind::Inhibited));
  CHECK_FALSE(has(v, ViolationKind::Timing));
}

TEST_CASE("tRCD window boundary") {
  ElaboratedNet net = ddr4({{"tRCD", 5}});
  auto at4 = run(net, {{0, "ACT", {0, 0, 0}}, {4, "RD", {0, 0, 0}}});
  CHECK(has(at4[1], ViolationKind::Timing));
  auto at5 = run(net, {{0, "ACT", {0, 0, 0}}, {5, "RD", {0, 0, 0}}});
  CHECK(at5[1].legal());
}

TEST_CASE("tFAW: fifth activate inside the window") {
  ElaboratedNet net = ddr4({{"tFAW", 20}, {"tRRD_S", 1}, {"tRRD_L", 1}});
  std::vector<Command> base{{0, "ACT", {0, 0, 0}}, {1, "ACT", {0, 1, 0}}, {2, "ACT", {0, 2, 0}}, {3, "ACT", {0, 3, 0}}};
  auto early = base;
  early.push_back({10, "ACT", {0, 0, 1}});
  auto v = run(net, early);
  for (std::size_t i = 0; i < 4; ++i) CHECK(v[i].legal());
  CHECK(has(v[4], ViolationKind::Window));
  auto late = base;
  late.push_back({20, "ACT", {0, 0, 1}});
  CHECK(run(net, late)[4].legal());
}

TEST_CASE("run examples") {
  ElaboratedNet net = ddr4();
  CHECK(run(net, {}).empty());
  const auto& t = net.config.timing_values;
  Cycle rcd = t.at("tRCD");
  Cycle pre = std::max<Cycle>(t.at("tRAS"), rcd + t.at("tRTP"));
  for (const auto& v : run(net, {{0, "ACT", {0, 0, 0}}, {rcd, "RD", {0, 0, 0}}, {pre, "PRE", {0, 0, 0}}})) {
    CHECK(v.legal());
  }
  auto bad = run(net, {{0, "RD", {0, 0, 0}}});
  REQUIRE(bad.size() == 1);
  CHECK(has(bad[0], ViolationKind::MissingToken));
}

TEST_CASE("commands must advance the cycle") {
  ElaboratedNet net = ddr4();
  MarkingState s = initial_state(net);
  step(net, s, {5, "ACT", {0, 0, 0}});
  CHECK_THROWS_AS(step(net, s, {5, "PRE", {0, 0, 0}}), Error);
  CHECK_THROWS_AS(step(net, s, {9, "NOP", {}}), Error);
  CHECK_THROWS_AS(step(net, s, {9, "ACT", {0, 7, 0}}), Error);
}

TEST_CASE("legality does not change the state") {
  ElaboratedNet net = ddr4();
  MarkingState s = initial_state(net);
  step(net, s, {0, "ACT", {0, 0, 0}});
  MarkingState copy = s;
  auto v = legality(net, s, {3, "RD", {0, 0, 0}});
  CHECK(s == copy);
  auto [next, w] = step(net, std::as_const(s), Command{3, "RD", {0, 0, 0}});
  CHECK(v.violations.size() == w.violations.size());
}

TEST_CASE("token conservation on random legal traces") {
  // Plain places only change through their arcs: a legal ACT adds one token,
  // PRE/PREA/RDA/WRA remove them, everything else leaves ACTIVE unchanged.
  ElaboratedNet net = ddr4();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto cmds = testing::random_trace(net, rng, 3000, 0.0);
    MarkingState s = initial_state(net);
    for (const auto& c : cmds) {
      std::size_t before = 0;
      for (std::size_t p = 0; p < net.place_instances.size(); ++p) {
        if (net.spec.places[net.place_instances[p].decl].name == "ACTIVE") before += s.token_count(p);
      }
      REQUIRE(step(net, s, c).legal());
      std::size_t after = 0;
      for (std::size_t p = 0; p < net.place_instances.size(); ++p) {
        if (net.spec.places[net.place_instances[p].decl].name == "ACTIVE") after += s.token_count(p);
      }
      if (c.kind == "ACT") CHECK(after == before + 1);
      else if (c.kind == "PRE" || c.kind == "RDA" || c.kind == "WRA") CHECK(after + 1 >= before);
      else if (c.kind != "PREA") CHECK(after == before);
      for (std::size_t p = 0; p < net.place_instances.size(); ++p) {
        CHECK(s.token_count(p) <= net.spec.places[net.place_instances[p].decl].capacity);
      }
    }
  }
}

TEST_CASE("window verdicts match a sliding-window count") {
  ElaboratedNet net = ddr4({}, "8bank");
  std::uint32_t faw = net.config.timing_values.at("tFAW");
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> gap(1, 12), bg(0, 1), bank(0, 3);
  for (int i = 0; i < 300; ++i) {
    MarkingState s = initial_state(net);
    std::deque<Cycle> recent;
    Cycle now = 0;
    for (int k = 0; k < 40; ++k) {
      now += static_cast<Cycle>(gap(rng));
      auto v = step(net, s, {now, "ACT", {0, static_cast<std::uint32_t>(bg(rng)), static_cast<std::uint32_t>(bank(rng))}});
      std::size_t inside = 0;
      for (Cycle c : recent) inside += now - c < faw;
      CHECK(has(v, ViolationKind::Window) == (inside >= 4));
      recent.push_back(now);
      // Live tokens are capped at four; the oldest is dropped on overflow.
      if (recent.size() > 4) recent.pop_front();
    }
  }
}

TEST_CASE("explore on the DDR4 bundle reaches every transition") {
  ElaboratedNet net = ddr4();
  auto r = explore(net, 10000, 1000000);
  CHECK(r.complete);
  for (const auto& [name, ok] : r.reachable) CHECK_MESSAGE(ok, name);
  CHECK(r.reachable.size() == net.spec.transitions.size());
}

TEST_CASE("explore: transition fed by a never-filled place is unreachable") {
  NetSpec spec = parse("Places { P; } Transitions { T; U; } Arcs { P -> T; }");
  auto r = explore(elaborate(spec, {}), 100, 1000);
  CHECK_FALSE(r.reachable.at("T"));
  CHECK(r.reachable.at("U"));
}

TEST_CASE("explore with horizon 0 reports only initially enabled transitions") {
  NetSpec spec = parse(R"(
Timings { t; }
Places { P; Q init(1); }
Transitions { A; B; C; }
Arcs { A -> P; P -> B; Q -> C; }
)");
  Config cfg;
  cfg.timing_values["t"] = 3;
  auto r = explore(elaborate(spec, cfg), 0, 1000);
  CHECK(r.reachable.at("A"));
  CHECK_FALSE(r.reachable.at("B"));
  CHECK(r.reachable.at("C"));
}

TEST_CASE("explore respects the state bound") {
  ElaboratedNet net = ddr4();
  auto r = explore(net, 10000, 2);
  CHECK_FALSE(r.complete);
  CHECK(r.states_explored <= 2);
}
