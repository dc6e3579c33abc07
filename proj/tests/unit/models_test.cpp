#include <doctest.h>

#include "dramv/models.hpp"

using namespace dramv;

namespace {

const PlaceRule& rule(const PropertySet& p, std::string_view place) {
  for (const auto& r : p.places) {
    if (r.place == place) return r;
  }
  FAIL("no place " << place);
  throw;
}

bool names(const std::vector<CommandMatch>& v, std::string_view cmd) {
  return std::any_of(v.begin(), v.end(), [&](const CommandMatch& m) { return m.command == cmd; });
}

}  // namespace

TEST_CASE("presets cover every timing parameter with a note") {
  for (const auto& m : bundled_models()) {
    NetSpec spec = parse(m.source);
    for (const auto& name : m.presets) {
      const TimingPreset* p = find_preset(name);
      REQUIRE_MESSAGE(p, name);
      CHECK(p->standard_name == spec.standard_name);
      for (const auto& t : spec.timing_params) {
        CHECK_MESSAGE(p->values.contains(t.name), name << " lacks " << t.name);
        CHECK_MESSAGE(!p->notes.at(t.name).empty(), t.name);
        CHECK(p->values.at(t.name) >= 1);
      }
    }
  }
}

TEST_CASE("every bundled config elaborates") {
  CHECK(bundled_models().size() == 2);
  for (const auto& m : bundled_models()) {
    NetSpec spec = parse(m.source, ParseMode::Strict, m.file);
    CHECK(validate(spec).empty());
    CHECK_FALSE(m.configs.empty());
    for (const auto& [name, text] : m.configs) {
      Config cfg = load_config(spec, text, name);
      CHECK(cfg.name == name);
      ElaboratedNet net = elaborate(spec, cfg);
      CHECK(count_summary(derive(net)).generated > 0);
    }
  }
}

TEST_CASE("DDR4 model structure") {
  const ModelBundle* m = find_bundled_model("ddr4");
  REQUIRE(m);
  NetSpec spec = parse(m->source);
  for (const char* p : {"ACTIVE", "PDN", "SREF", "FAW"}) CHECK_MESSAGE(spec.find_place(p), p);
  CHECK(spec.transitions.size() == 12);
  PropertySet props = derive(elaborate(spec, load_config(spec, m->configs.at("16bank"))));
  const auto& active = rule(props, "ACTIVE");
  CHECK(names(active.increments, "ACT"));
  CHECK(names(active.resets, "PREA"));
  CHECK(names(active.resets, "PRE"));
  for (const char* c : {"RDA", "WRA"}) CHECK_MESSAGE(names(active.decrements, c), c);
  CHECK_FALSE(names(active.decrements, "RD"));
  for (const char* p : {"ACTIVE", "PDN", "SREF"}) {
    CHECK_MESSAGE(props.find(std::string("inhibitor_") + p + "_REFA"), p);
  }
  CHECK(props.find("window_FAW"));
  CHECK(props.find("window_FAW")->max_count == 4);
  CHECK(props.find("arc_ACTIVE_RD"));
  CHECK(props.find("inhibitor_ACTIVE_ACT"));
}

TEST_CASE("DDR5 delta renames and additions") {
  const ModelBundle* m = find_bundled_model("ddr5-delta");
  REQUIRE(m);
  CHECK(m->renames.canonical("REFab") == "REFA");
  CHECK(m->renames.canonical("PREab") == "PREA");
  NetSpec spec = parse(m->source);
  CHECK(spec.standard_name == "DDR5");
  for (const char* t : {"REFSB", "RDBL32", "WRBL32", "REFab", "PREab"}) CHECK_MESSAGE(spec.find_transition(t), t);
}

TEST_CASE("every transition is reachable in both bundles") {
  for (const auto& m : bundled_models()) {
    NetSpec spec = parse(m.source);
    ElaboratedNet net = elaborate(spec, load_config(spec, m.configs.begin()->second));
    ReachabilitySummary r = explore(net, 10000, 2000000);
    CHECK(r.complete);
    for (const auto& [name, ok] : r.reachable) CHECK_MESSAGE(ok, m.name << " " << name);
  }
}

TEST_CASE("config presets and overrides") {
  const ModelBundle* m = find_bundled_model("ddr4");
  NetSpec spec = parse(m->source);
  Config base = load_config(spec, "ranks=1\nbankgroups=4\nbanks=4\n");
  CHECK(base.timing_values.at("tRCD") == find_preset("ddr4-3200-example")->values.at("tRCD"));
  Config over = load_config(spec, "ranks=1\nbankgroups=4\nbanks=4\ntRCD=5\n");
  CHECK(over.timing_values.at("tRCD") == 5);
  CHECK(over.timing_values.at("tRP") == base.timing_values.at("tRP"));
  CHECK_THROWS_AS(load_config(spec, "preset=no-such-preset\nranks=1\nbankgroups=4\nbanks=4\n"), Error);
}

TEST_CASE("preset parsing errors") {
  CHECK_THROWS_AS(parse_preset("preset=x\nstandard=DDR4\ntRCD=3\n"), Error);
  CHECK_THROWS_AS(parse_preset("standard=DDR4\ntRCD=3\nnote.tRCD=a\n"), Error);
  TimingPreset p = parse_preset("preset=x\nstandard=DDR4\ntRCD=3\nnote.tRCD=a\n");
  CHECK(p.values.at("tRCD") == 3);
  CHECK(p.notes.at("tRCD") == "a");
}
