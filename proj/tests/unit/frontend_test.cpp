#include <doctest.h>

#include <random>

#include "dramv/dramml.hpp"
#include "dramv/models.hpp"
#include "netgen.hpp"

using namespace dramv;

namespace {

std::vector<Diagnostic> diagnostics_of(std::string_view src, ParseMode mode = ParseMode::Strict) {
  try {
    parse(src, mode);
  } catch (const ParseError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has_message(const std::vector<Diagnostic>& diags, std::string_view needle) {
  for (const auto& d : diags) {
    if (d.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

const char* kBank = R"(
Timings { tRCD; }
Arcs {
    ACT -> ACTIVE;
    ACTIVE -> RD;
    RD -> ACTIVE;
    ACT -<> RD (tRCD);
}
banks : bank {
    Places { ACTIVE; }
    Transitions { ACT; RD; }
}
)";

}  // namespace

TEST_CASE("place-to-transition arc inside a bank hierarchy") {
  NetSpec spec = parse(kBank);
  REQUIRE(spec.arcs.size() == 4);
  CHECK(spec.arcs[1].kind == ArcKind::P2T);
  CHECK(spec.arcs[1].from == "ACTIVE");
  CHECK(spec.arcs[1].to == "RD");
  CHECK(spec.arcs[0].kind == ArcKind::T2P);
  CHECK(spec.find_place("ACTIVE")->owner == *spec.find_hierarchy("bank"));
}

TEST_CASE("timing arc carries its parameter") {
  NetSpec spec = parse(kBank);
  const auto& a = spec.arcs[3];
  CHECK(a.kind == ArcKind::Timing);
  CHECK(a.from == "ACT");
  CHECK(a.to == "RD");
  REQUIRE(a.timing_param);
  CHECK(*a.timing_param == "tRCD");
}

TEST_CASE("empty Arcs block") {
  NetSpec spec = parse("Arcs { }\nPlaces { P; }\nTransitions { T; }");
  CHECK(spec.arcs.empty());
}

TEST_CASE("timing arc without parameter is rejected") {
  auto diags = diagnostics_of("Arcs { ACTIVE -<> RD; }", ParseMode::SyntaxOnly);
  REQUIRE(diags.size() == 1);
  CHECK(has_message(diags, "timing arc requires a timing parameter"));
}

TEST_CASE("syntax-only mode accepts fragments with undeclared names") {
  NetSpec spec = parse("Arcs { ACT -<> RD (tRCD); ACTIVE -o REFA; }", ParseMode::SyntaxOnly);
  CHECK(spec.arcs.size() == 2);
  CHECK_FALSE(diagnostics_of("Arcs { ACT -<> RD (tRCD); }", ParseMode::Strict).empty());
}

TEST_CASE("validation diagnostics are collected in source order") {
  const char* src = R"(
Timings { tA; }
Places { P capacity(0); Q; }
Transitions { T; }
Arcs {
    P -> T;
    X -> T;
    T -<> T;
    P -> T;
}
)";
  std::vector<Diagnostic> diags = diagnostics_of(src, ParseMode::SyntaxOnly);
  REQUIRE(diags.size() == 1);  // syntax first: timing arc without parameter
  src = R"(
Timings { tA; }
Places { P capacity(0); Q; }
Transitions { T; }
Arcs {
    P -> T;
    X -> T;
    T -<> Q (tA);
    P -> T;
}
)";
  diags = diagnostics_of(src);
  REQUIRE(diags.size() >= 4);
  CHECK(has_message(diags, "zero capacity"));
  CHECK(has_message(diags, "'X'"));
  CHECK(has_message(diags, "duplicate arc"));
  for (std::size_t i = 1; i < diags.size(); ++i) CHECK(diags[i - 1].pos.line <= diags[i].pos.line);
  CHECK(diagnostics_of(src) .size() == diags.size());
}

TEST_CASE("arc kind constrains endpoint kinds") {
  CHECK(has_message(diagnostics_of("Places { P; Q; } Transitions { T; } Arcs { P -o Q; }"), "transition"));
  CHECK(has_message(diagnostics_of("Timings { t; } Places { P; } Transitions { T; } Arcs { P -<> T (t); }"),
                    "transition"));
  CHECK(diagnostics_of("Places { P; } Transitions { T; } Arcs { T -> P; P ->> T; }").size() == 1);
  CHECK(diagnostics_of("Places { P; } Transitions { T; } Arcs { P -> T; P ->> T; }").size() == 1);
  CHECK(diagnostics_of("Places { P; } Transitions { T; } Arcs { P -> T; T -> P; }").empty());
}

TEST_CASE("scope qualifiers") {
  const char* src = R"(
Timings { t; }
Arcs {
    A -<> A (t) @sibling(bank);
    A -<> A (t) @sibling(group);
    A -<> A (t) @same(group);
    A -<> A (t) @all;
    A -<> A (t);
}
groups : group { banks : bank { Transitions { A; } } }
)";
  NetSpec spec = parse(src);
  REQUIRE(spec.arcs.size() == 5);
  CHECK(spec.arcs[0].scope.kind == ScopeKind::Sibling);
  CHECK(spec.arcs[0].scope.level == "bank");
  CHECK(spec.arcs[3].scope.kind == ScopeKind::All);
  CHECK(spec.arcs[4].scope.is_default());
  CHECK(has_message(diagnostics_of("Places { P; } Transitions { T; } Arcs { P -> T @all; }"), "not allowed"));
  CHECK(has_message(diagnostics_of("Timings { t; } Transitions { T; } Arcs { T -<> T (t) @sibling; }"), "sibling"));
}

TEST_CASE("render of a single place") {
  NetSpec spec = parse("Places { P; }");
  std::string text = render(spec);
  CHECK(text.find("Places {") != std::string::npos);
  CHECK(text.find("P;") != std::string::npos);
  CHECK(text.find("Arcs") == std::string::npos);
}

TEST_CASE("render shows every arc operator") {
  const char* src = R"(
Timings { t; }
Places { P; Q; }
Transitions { A; B; C; }
Arcs {
    A -> P;
    P -> B;
    Q -o A;
    Q ->> C;
    A -<> B (t);
}
)";
  std::string text = render(parse(src));
  for (std::string_view op : {" -> ", " -o ", " ->> ", " -<> "}) CHECK(text.find(op) != std::string::npos);
}

TEST_CASE("round trip on bundled models") {
  for (const auto& m : bundled_models()) {
    NetSpec a = parse(m.source, ParseMode::Strict, m.file);
    NetSpec b = parse(render(a));
    CHECK_MESSAGE(structurally_equal(a, b), m.name);
    CHECK(render(b) == render(a));
  }
}

TEST_CASE("round trip on random specs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    NetSpec a = testing::random_netspec(rng);
    REQUIRE(validate(a).empty());
    std::string text = render(a);
    NetSpec b = parse(text);
    CHECK_MESSAGE(structurally_equal(a, b), text);
  }
}

TEST_CASE("structural equality ignores declaration order and positions") {
  NetSpec a = parse("Places { P; Q; } Transitions { T; } Arcs { P -> T; Q -o T; }");
  NetSpec b = parse("Transitions { T; }\n\nPlaces { Q; P; }\nArcs { Q -o T; P -> T; }");
  CHECK(structurally_equal(a, b));
  NetSpec c = parse("Places { P; Q; } Transitions { T; } Arcs { P -> T; }");
  CHECK_FALSE(structurally_equal(a, c));
}

TEST_CASE("syntax errors name the expected token") {
  auto diags = diagnostics_of("Places { P }");
  REQUIRE(diags.size() == 1);
  CHECK(has_message(diags, "syntax error"));
  CHECK(diags[0].pos.line == 1);
}
