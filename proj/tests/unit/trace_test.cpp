#include <doctest.h>

#include <random>

#include "dramv/models.hpp"
#include "dramv/trace.hpp"
#include "netgen.hpp"
#include "report.hpp"
#include "scheduler.hpp"

using namespace dramv;

namespace {

struct Ddr4 {
  NetSpec spec;
  ElaboratedNet net;
  PropertySet props;
};

Ddr4 ddr4(const std::string& cfg_name = "16bank") {
  const ModelBundle* m = find_bundled_model("ddr4");
  NetSpec spec = parse(m->source);
  ElaboratedNet net = elaborate(spec, load_config(spec, m->configs.at(cfg_name)));
  PropertySet props = derive(net);
  return {spec, std::move(net), std::move(props)};
}

std::vector<Diagnostic> load_errors(std::string_view text, const PropertySet& props) {
  try {
    load_trace(text, props);
  } catch (const ParseError& e) {
    return e.diagnostics();
  }
  return {};
}

CommandTrace as_trace(const std::vector<Command>& cmds) {
  CommandTrace t;
  t.origin = "generated";
  for (std::size_t i = 0; i < cmds.size(); ++i) t.records.push_back({cmds[i], i + 1});
  return t;
}

}  // namespace

TEST_CASE("loading a two-record trace") {
  auto d = ddr4();
  CommandTrace t = load_trace("0 ACT 0 0 0\n14 RD 0 0 0\n", d.props);
  REQUIRE(t.records.size() == 2);
  CHECK(t.records[1].command == Command{14, "RD", {0, 0, 0}});
  CHECK(t.records[1].line == 2);
}

TEST_CASE("trace format errors") {
  auto d = ddr4();
  auto dup = load_errors("5 ACT 0 0 0\n5 RD 0 0 0\n", d.props);
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].message.find("one command per cycle") != std::string::npos);
  CHECK(dup[0].pos.line == 2);
  auto range = load_errors("0 RD 0 9 0\n", d.props);
  REQUIRE(range.size() == 1);
  CHECK(range[0].message.find("bankgroup") != std::string::npos);
  auto many = load_errors("0 NOP\n1 ACT 0 0\n2 ACT 0 0 0\n1 PRE 0 0 0\nx=1\n", d.props);
  CHECK(many.size() == 4);
  CHECK(load_errors("# header\nformat=1\nstandard=DDR4\n\n0 ACT 0 0 0  # open\n", d.props).empty());
}

TEST_CASE("render_trace round trip") {
  auto d = ddr4();
  std::vector<Command> cmds{{0, "ACT", {0, 1, 2}}, {30, "REFA", {0}}};
  CommandTrace t = load_trace(render_trace(cmds, {{"format", "1", 0}}), d.props);
  CHECK(t.commands() == cmds);
  CHECK(t.header.size() == 1);
}

TEST_CASE("check examples") {
  auto d = ddr4();
  Cycle rcd = d.props.config.timing_values.at("tRCD");
  VerdictReport ok = check(d.props, as_trace({{0, "ACT", {0, 0, 0}}, {rcd, "RD", {0, 0, 0}}}));
  const auto* arc = ok.find("arc_ACTIVE_RD");
  REQUIRE(arc);
  CHECK(arc->status == Status::Holds);
  CHECK(arc->activations == 1);
  CHECK(ok.count(Status::Violated) == 0);

  VerdictReport bad = check(d.props, as_trace({{0, "RD", {0, 0, 0}}}));
  arc = bad.find("arc_ACTIVE_RD");
  CHECK(arc->status == Status::Violated);
  REQUIRE(arc->witness);
  CHECK(arc->witness->command.cycle == 0);
  CHECK(arc->witness->instance == Coords{0, 0, 0});

  for (const auto& v : ok.verdicts) {
    bool wra = std::find(v.commands.begin(), v.commands.end(), "WRA") != v.commands.end();
    if (wra) CHECK_MESSAGE(v.status == Status::NotActivated, v.unique_id);
  }
}

TEST_CASE("empty trace") {
  auto d = ddr4();
  VerdictReport r = check(d.props, as_trace({}));
  CHECK(r.count(Status::NotActivated) == r.verdicts.size());
  auto c = coverage(r);
  CHECK(c.unexercised == d.props.command_kinds);
}

TEST_CASE("trace header must match the configuration") {
  auto d = ddr4("8bank");
  CommandTrace t = load_trace("bankgroups=4\n0 ACT 0 0 0\n", d.props);
  CHECK_THROWS_AS(check(d.props, t), Error);
  CommandTrace s = load_trace("standard=DDR5\n0 ACT 0 0 0\n", d.props);
  CHECK_THROWS_AS(check(d.props, s), Error);
  CHECK_NOTHROW(check(d.props, load_trace("standard=DDR4\nbankgroups=2\n0 ACT 0 0 0\n", d.props)));
}

TEST_CASE("coverage flags the command kinds a controller never issues") {
  auto d = ddr4();
  std::mt19937_64 rng(2);
  std::set<std::string> skip{"RDA", "WRA", "PDNE", "PDNX", "SREFE", "SREFX"};
  std::vector<CommandTrace> corpus;
  for (int i = 0; i < 20; ++i) {
    auto cmds = testing::random_trace(d.net, rng, 4000, 0.0);
    std::vector<Command> kept;
    for (const auto& c : cmds) {
      if (!skip.contains(c.kind)) kept.push_back(c);
    }
    corpus.push_back(as_trace(kept));
  }
  auto c = coverage(check(d.props, corpus));
  CHECK(std::set<std::string>(c.unexercised.begin(), c.unexercised.end()) == skip);
  for (const auto& k : skip) CHECK(c.activations.at(k) == 0);
}

TEST_CASE("coverage is empty when every command is exercised") {
  auto d = ddr4();
  std::mt19937_64 rng(4);
  std::vector<CommandTrace> corpus;
  for (int i = 0; i < 40; ++i) corpus.push_back(as_trace(testing::random_trace(d.net, rng, 4000, 0.0)));
  CHECK(coverage(check(d.props, corpus)).unexercised.empty());
}

TEST_CASE("per-record verdicts agree with petri-core on DDR4") {
  for (const char* cfg : {"16bank", "8bank"}) {
    auto d = ddr4(cfg);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
      auto cmds = testing::random_trace(d.net, rng, 2000, i % 2 ? 0.05 : 0.0);
      auto run_v = run(d.net, cmds);
      VerdictReport r = check(d.props, as_trace(cmds));
      std::vector<std::size_t> expected;
      for (std::size_t k = 0; k < run_v.size(); ++k) {
        if (!run_v[k].legal()) expected.push_back(k);
      }
      CHECK(r.violating_records.at(0) == expected);
    }
  }
}

TEST_CASE("per-record verdicts agree with petri-core on random nets") {
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    NetSpec spec = testing::random_netspec(rng);
    if (spec.transitions.empty()) continue;
    ElaboratedNet net = elaborate(spec, testing::random_config(spec, rng));
    PropertySet props = derive(net);
    for (int k = 0; k < 5; ++k) {
      // Uniformly random commands: most are illegal somewhere.
      std::vector<Command> cmds;
      Cycle now = 0;
      std::uniform_int_distribution<std::size_t> pick(0, net.transition_instances.size() - 1);
      std::uniform_int_distribution<int> gap(1, 6);
      for (int n = 0; n < 60; ++n) {
        now += static_cast<Cycle>(gap(rng));
        const auto& t = net.transition_instances[pick(rng)];
        cmds.push_back({now, spec.transitions[t.decl].name, t.coords});
      }
      auto run_v = run(net, cmds);
      std::vector<std::size_t> expected;
      for (std::size_t n = 0; n < run_v.size(); ++n) {
        if (!run_v[n].legal()) expected.push_back(n);
      }
      CHECK_MESSAGE(check(props, as_trace(cmds)).violating_records.at(0) == expected, render(spec));
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("witness is the first violating record") {
  auto d = ddr4("8bank");
  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    auto cmds = testing::random_trace(d.net, rng, 1500, 0.08);
    VerdictReport r = check(d.props, as_trace(cmds));
    for (const auto& v : r.verdicts) {
      if (!v.witness) continue;
      std::size_t w = v.witness->record;
      std::vector<Command> before(cmds.begin(), cmds.begin() + static_cast<std::ptrdiff_t>(w));
      std::vector<Command> through(cmds.begin(), cmds.begin() + static_cast<std::ptrdiff_t>(w + 1));
      CHECK(check(d.props, as_trace(before)).find(v.unique_id)->status != Status::Violated);
      CHECK(check(d.props, as_trace(through)).find(v.unique_id)->status == Status::Violated);
    }
  }
}

TEST_CASE("concurrent corpus check is identical to sequential") {
  auto d = ddr4();
  std::mt19937_64 rng(12);
  std::vector<CommandTrace> corpus;
  std::vector<std::string> names;
  for (int i = 0; i < 24; ++i) {
    corpus.push_back(as_trace(testing::random_trace(d.net, rng, 2000, 0.03)));
    names.push_back("t" + std::to_string(i));
  }
  auto a = report::check_json(check(d.props, corpus, 1), names).dump();
  auto b = report::check_json(check(d.props, corpus, 4), names).dump();
  CHECK(a == b);
}

TEST_CASE("min gap and slack") {
  auto d = ddr4();
  Cycle rcd = d.props.config.timing_values.at("tRCD");
  VerdictReport r = check(d.props, as_trace({{0, "ACT", {0, 0, 0}}, {rcd + 3, "RD", {0, 0, 0}}}));
  const auto* v = r.find("timing_ACT_RD");
  REQUIRE(v->min_gap);
  CHECK(*v->min_gap == rcd + 3);
  CHECK(*v->slack == 3);
  CHECK(v->activations == 1);
}
