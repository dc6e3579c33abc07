#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "dramv/models.hpp"
#include "dramv/properties.hpp"
#include "netgen.hpp"
#include "sva_subset.hpp"

using namespace dramv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PropertySet toy_props() {
  std::string dir = DRAMV_GOLDEN_DIR;
  NetSpec spec = parse(slurp(dir + "/toy.dramml"));
  return derive(elaborate(spec, load_config(spec, slurp(dir + "/toy.cfg"))));
}

PropertySet ddr4_props(std::map<std::string, std::uint32_t> overrides = {}) {
  const ModelBundle* m = find_bundled_model("ddr4");
  NetSpec spec = parse(m->source);
  Config cfg = load_config(spec, m->configs.at("16bank"));
  for (const auto& [k, v] : overrides) cfg.timing_values[k] = v;
  return derive(elaborate(spec, cfg));
}

const testing::SvaProperty* find(const testing::SvaModule& m, std::string_view name) {
  for (const auto& p : m.properties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("toy model matches the golden file") {
  std::string dir = DRAMV_GOLDEN_DIR;
  CHECK(emit_sva(toy_props()) == slurp(dir + "/toy.sv"));
  SignalMap map = parse_signal_map(slurp(dir + "/toy.signals"));
  CHECK(emit_sva(toy_props(), map) == slurp(dir + "/toy_mapped.sv"));
}

TEST_CASE("ARC block shape") {
  std::string sv = emit_sva(toy_props());
  CHECK(sv.find("property arc_BUSY_USE;") != std::string::npos);
  CHECK(sv.find("assert property(arc_BUSY_USE);") != std::string::npos);
  auto m = testing::parse_sva(sv);
  const auto* p = find(m, "arc_BUSY_USE");
  REQUIRE(p);
  CHECK(p->shape == testing::Shape::Arc);
  CHECK(p->place == "BUSY");
  CHECK(p->antecedent.command == "USE");
  CHECK(p->asserted);
}

TEST_CASE("timing block carries the resolved window") {
  PropertySet props = ddr4_props();
  std::string sv = emit_sva(props);
  std::uint32_t rcd = props.config.timing_values.at("tRCD");
  CHECK(sv.find("not ##[1:(" + std::to_string(rcd) + " - 1)] (cmd == RD") != std::string::npos);
  auto m = testing::parse_sva(sv);
  const auto* p = find(m, "timing_ACT_RD");
  REQUIRE(p);
  CHECK(p->shape == testing::Shape::Timing);
  CHECK(p->window_hi == rcd);
  CHECK(p->antecedent.command == "ACT");
  CHECK(p->consequent.command == "RD");
  CHECK(p->loops == std::vector<std::string>{"rank_id", "bankgroup_id", "bank_id"});
}

TEST_CASE("self loops get no update branch") {
  auto m = testing::parse_sva(emit_sva(ddr4_props()));
  const testing::SvaPlace* active = nullptr;
  for (const auto& p : m.places) {
    if (p.name == "ACTIVE") active = &p;
  }
  REQUIRE(active);
  std::set<std::string> cmds;
  for (const auto& b : active->branches) cmds.insert(b.command + ":" + b.update);
  CHECK(cmds == std::set<std::string>{"ACT:inc", "RDA:dec", "WRA:dec", "PRE:reset", "PREA:reset"});
}

TEST_CASE("timing value of one is reported as vacuous") {
  auto m = testing::parse_sva(emit_sva(ddr4_props({{"tCCD_S", 1}})));
  CHECK(find(m, "timing_RD_RD_sibling_bankgroup") == nullptr);
  CHECK(std::count(m.vacuous.begin(), m.vacuous.end(), "timing_RD_RD_sibling_bankgroup") == 1);
}

TEST_CASE("every property is emitted once at its scope depth") {
  PropertySet props = ddr4_props();
  auto m = testing::parse_sva(emit_sva(props));
  CHECK(m.unparsed.empty());
  CHECK(m.properties.size() + m.vacuous.size() == props.properties.size());
  for (const auto& p : props.properties) {
    const auto* s = find(m, p.unique_id);
    REQUIRE_MESSAGE(s, p.unique_id);
    CHECK(s->asserted);
    CHECK(s->loops.size() == props.topology.depth(p.scope));
    CHECK(s->assert_has_clock == (p.kind == PropertyKind::Inhibitor));
  }
  CHECK(m.genvars == std::vector<std::string>{"rank_id", "bankgroup_id", "bank_id"});
}

TEST_CASE("random nets emit only recognised shapes") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    NetSpec spec = testing::random_netspec(rng);
    PropertySet props = derive(elaborate(spec, testing::random_config(spec, rng)));
    std::string sv = emit_sva(props);
    auto m = testing::parse_sva(sv);
    CHECK_MESSAGE(m.unparsed.empty(), sv);
    CHECK(m.properties.size() + m.vacuous.size() == props.properties.size());
    CHECK(emit_sva(props) == sv);
  }
}

TEST_CASE("signal map parsing") {
  SignalMap map = parse_signal_map("clock=ck\ncoord.bank=ba\n");
  CHECK(map.clock == "ck");
  CHECK(map.coordinate_port("bank") == "ba");
  CHECK(map.coordinate_port("rank") == "cmd_rank");
  CHECK_THROWS_AS(parse_signal_map("colour=red\n"), ParseError);
}
