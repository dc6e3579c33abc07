#include "dramv/dramml.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

namespace dramv {

std::string Diagnostic::str() const {
  return fmt::format("{}:{}: {}", pos.line, pos.column, message);
}

ParseError::ParseError(std::string origin, std::vector<Diagnostic> diags)
    : Error([&] {
        std::string msg;
        for (const auto& d : diags) {
          if (!msg.empty()) msg += '\n';
          msg += origin + ":" + d.str();
        }
        return msg;
      }()),
      origin_(std::move(origin)),
      diags_(std::move(diags)) {}

std::string_view arc_operator(ArcKind kind) {
  switch (kind) {
    case ArcKind::P2T:
    case ArcKind::T2P:
      return "->";
    case ArcKind::Inhibitor:
      return "-o";
    case ArcKind::Reset:
      return "->>";
    case ArcKind::Timing:
      return "-<>";
  }
  return "?";
}

std::string_view arc_kind_name(ArcKind kind) {
  switch (kind) {
    case ArcKind::P2T:
      return "P2T";
    case ArcKind::T2P:
      return "T2P";
    case ArcKind::Inhibitor:
      return "INHIBITOR";
    case ArcKind::Reset:
      return "RESET";
    case ArcKind::Timing:
      return "TIMING";
  }
  return "?";
}

std::string scope_suffix(const ScopeQualifier& scope) {
  if (scope.is_default()) return {};
  std::string out = "@";
  switch (scope.kind) {
    case ScopeKind::Same:
      out += "same";
      break;
    case ScopeKind::Sibling:
      out += "sibling";
      break;
    case ScopeKind::All:
      return "@all";
  }
  if (!scope.level.empty()) out += "(" + scope.level + ")";
  return out;
}

const PlaceDecl* NetSpec::find_place(std::string_view name) const {
  auto it = std::find_if(places.begin(), places.end(),
                         [&](const PlaceDecl& p) { return p.name == name; });
  return it == places.end() ? nullptr : &*it;
}

const TransitionDecl* NetSpec::find_transition(std::string_view name) const {
  auto it = std::find_if(transitions.begin(), transitions.end(),
                         [&](const TransitionDecl& t) { return t.name == name; });
  return it == transitions.end() ? nullptr : &*it;
}

std::optional<NodeId> NetSpec::find_hierarchy(std::string_view name) const {
  for (std::size_t i = 0; i < hierarchies.size(); ++i) {
    if (hierarchies[i].name == name) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

std::vector<NodeId> NetSpec::path_to(NodeId node) const {
  std::vector<NodeId> path;
  for (NodeId n = node; n != kRoot; n = hierarchies.at(static_cast<std::size_t>(n)).parent) {
    path.push_back(n);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Int, Punct, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src, const std::string& origin) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '-') {
      auto rest = src.substr(i);
      std::string_view op;
      if (rest.starts_with("-<>")) {
        op = "-<>";
      } else if (rest.starts_with("->>")) {
        op = "->>";
      } else if (rest.starts_with("->")) {
        op = "->";
      } else if (rest.starts_with("-o") && (rest.size() == 2 || !is_ident_char(rest[2]))) {
        op = "-o";
      }
      if (!op.empty()) {
        out.push_back({Tok::Op, std::string(op), pos});
        advance(op.size());
        continue;
      }
    }
    if (std::string_view(":{};()@").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(origin, {{pos, fmt::format("unexpected character '{}'", c)}});
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string origin)
      : toks_(std::move(toks)), origin_(std::move(origin)) {}

  NetSpec run() {
    if (peek().kind == Tok::Ident && peek().text == "standard") {
      next();
      spec_.standard_name = expect_ident("standard name");
      expect(";");
    }
    parse_body(kRoot);
    if (peek().kind != Tok::End) fail({"end of input"});
    return std::move(spec_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at(std::string_view text) const {
    return (peek().kind == Tok::Punct || peek().kind == Tok::Op) && peek().text == text;
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) list += i + 1 == expected.size() ? " or " : ", ";
      list += expected[i];
    }
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(origin_, {{t.pos, fmt::format("syntax error: expected {}, found {}", list, found)}});
  }

  void expect(std::string_view text) {
    if (!at(text)) fail({fmt::format("'{}'", text)});
    next();
  }

  std::string expect_ident(std::string_view what) {
    if (peek().kind != Tok::Ident) fail({std::string(what)});
    return next().text;
  }

  std::uint32_t expect_int(std::string_view what) {
    if (peek().kind != Tok::Int) fail({std::string(what)});
    const Token& t = next();
    unsigned long v = 0;
    try {
      v = std::stoul(t.text);
    } catch (const std::exception&) {
      throw ParseError(origin_, {{t.pos, "integer literal out of range"}});
    }
    if (v > 0xffffffffUL) throw ParseError(origin_, {{t.pos, "integer literal out of range"}});
    return static_cast<std::uint32_t>(v);
  }

  void parse_body(NodeId owner) {
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::End || at("}")) return;
      if (t.kind == Tok::Ident && peek(1).kind == Tok::Punct && peek(1).text == "{") {
        if (t.text == "Places") {
          parse_places(owner);
          continue;
        }
        if (t.text == "Transitions") {
          parse_names(owner, /*transitions=*/true);
          continue;
        }
        if (t.text == "Timings") {
          parse_names(owner, /*transitions=*/false);
          continue;
        }
        if (t.text == "Arcs") {
          parse_arcs();
          continue;
        }
      }
      if ((t.kind == Tok::Ident || t.kind == Tok::Int) && peek(1).kind == Tok::Punct &&
          peek(1).text == ":") {
        HierarchyDecl h;
        h.pos = t.pos;
        h.count_param = next().text;
        next();
        h.name = expect_ident("hierarchy name");
        h.parent = owner;
        expect("{");
        spec_.hierarchies.push_back(h);
        parse_body(static_cast<NodeId>(spec_.hierarchies.size() - 1));
        expect("}");
        continue;
      }
      fail({"'Places'", "'Transitions'", "'Arcs'", "'Timings'", "hierarchy declaration", "'}'"});
    }
  }

  void parse_places(NodeId owner) {
    next();
    expect("{");
    while (!at("}")) {
      PlaceDecl p;
      p.pos = peek().pos;
      p.name = expect_ident("place name or '}'");
      p.owner = owner;
      while (peek().kind == Tok::Ident) {
        const Token& ann = next();
        expect("(");
        if (ann.text == "capacity") {
          p.capacity = expect_int("capacity value");
          p.explicit_capacity = true;
        } else if (ann.text == "lifetime") {
          p.lifetime = expect_ident("timing parameter");
        } else if (ann.text == "init") {
          p.initial_tokens = expect_int("initial token count");
        } else {
          throw ParseError(origin_, {{ann.pos, fmt::format("unknown place annotation '{}'", ann.text)}});
        }
        expect(")");
      }
      expect(";");
      spec_.places.push_back(std::move(p));
    }
    expect("}");
  }

  void parse_names(NodeId owner, bool transitions) {
    next();
    expect("{");
    while (!at("}")) {
      SourcePos pos = peek().pos;
      std::string name = expect_ident(transitions ? "transition name or '}'" : "timing name or '}'");
      expect(";");
      if (transitions) {
        spec_.transitions.push_back({std::move(name), owner, pos});
      } else {
        spec_.timing_params.push_back({std::move(name), pos});
      }
    }
    expect("}");
  }

  void parse_arcs() {
    next();
    expect("{");
    while (!at("}")) {
      ArcDecl a;
      a.pos = peek().pos;
      a.from = expect_ident("arc source or '}'");
      if (peek().kind != Tok::Op) fail({"'->'", "'-o'", "'->>'", "'-<>'"});
      std::string op = next().text;
      a.to = expect_ident("arc target");
      if (op == "-o") {
        a.kind = ArcKind::Inhibitor;
      } else if (op == "->>") {
        a.kind = ArcKind::Reset;
      } else if (op == "-<>") {
        a.kind = ArcKind::Timing;
      } else {
        a.kind = ArcKind::P2T;  // direction resolved against declarations later
      }
      if (at("(")) {
        next();
        a.timing_param = expect_ident("timing parameter");
        expect(")");
      }
      if (at("@")) {
        next();
        SourcePos qpos = peek().pos;
        std::string q = expect_ident("scope qualifier");
        if (q == "same") {
          a.scope.kind = ScopeKind::Same;
        } else if (q == "sibling") {
          a.scope.kind = ScopeKind::Sibling;
        } else if (q == "all") {
          a.scope.kind = ScopeKind::All;
        } else {
          throw ParseError(origin_, {{qpos, fmt::format("unknown scope qualifier '{}'", q)}});
        }
        if (a.scope.kind != ScopeKind::All && at("(")) {
          next();
          a.scope.level = expect_ident("hierarchy name");
          expect(")");
        }
      }
      if (a.kind == ArcKind::Timing && !a.timing_param) {
        throw ParseError(origin_, {{a.pos, "timing arc requires a timing parameter"}});
      }
      if (a.kind != ArcKind::Timing && a.timing_param) {
        throw ParseError(origin_, {{a.pos, "only timing arcs take a timing parameter"}});
      }
      expect(";");
      spec_.arcs.push_back(std::move(a));
    }
    expect("}");
  }

  std::vector<Token> toks_;
  std::string origin_;
  std::size_t pos_ = 0;
  NetSpec spec_;
};

// `->` is P2T when the source is a place, T2P when the source is a transition.
void resolve_arrow_direction(NetSpec& spec) {
  for (auto& a : spec.arcs) {
    if (a.kind == ArcKind::P2T && spec.find_transition(a.from) && spec.find_place(a.to)) {
      a.kind = ArcKind::T2P;
    }
  }
}

}  // namespace

NetSpec parse(std::string_view source, ParseMode mode, std::string origin) {
  Parser parser(lex(source, origin), origin);
  NetSpec spec = parser.run();
  resolve_arrow_direction(spec);
  if (mode == ParseMode::Strict) {
    auto diags = validate(spec);
    if (!diags.empty()) throw ParseError(std::move(origin), std::move(diags));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate(const NetSpec& spec) {
  std::vector<Diagnostic> diags;
  auto report = [&](SourcePos pos, std::string msg) { diags.push_back({pos, std::move(msg)}); };

  std::map<std::string, SourcePos> seen_hier;
  for (const auto& h : spec.hierarchies) {
    if (!seen_hier.emplace(h.name, h.pos).second) {
      report(h.pos, fmt::format("duplicate hierarchy '{}'", h.name));
    }
  }
  std::set<std::string> timings;
  for (const auto& t : spec.timing_params) {
    if (!timings.insert(t.name).second) report(t.pos, fmt::format("duplicate timing parameter '{}'", t.name));
  }
  std::set<std::string> nodes;
  for (const auto& p : spec.places) {
    if (!nodes.insert(p.name).second) report(p.pos, fmt::format("duplicate declaration '{}'", p.name));
    if (p.capacity == 0) report(p.pos, fmt::format("place '{}' has zero capacity", p.name));
    if (p.initial_tokens > p.capacity) {
      report(p.pos, fmt::format("place '{}' initial tokens exceed capacity", p.name));
    }
    if (p.lifetime && !timings.contains(*p.lifetime)) {
      report(p.pos, fmt::format("undeclared timing parameter '{}'", *p.lifetime));
    }
    if (p.lifetime && p.initial_tokens != 0) {
      report(p.pos, fmt::format("timed place '{}' cannot carry initial tokens", p.name));
    }
  }
  for (const auto& t : spec.transitions) {
    if (!nodes.insert(t.name).second) report(t.pos, fmt::format("duplicate declaration '{}'", t.name));
  }

  using ArcKey = std::tuple<ArcKind, std::string, std::string, ScopeQualifier>;
  std::set<ArcKey> arcs;
  std::set<std::pair<std::string, std::string>> t2p, p2t, resets;
  for (const auto& a : spec.arcs) {
    const PlaceDecl* from_place = spec.find_place(a.from);
    const TransitionDecl* from_trans = spec.find_transition(a.from);
    const PlaceDecl* to_place = spec.find_place(a.to);
    const TransitionDecl* to_trans = spec.find_transition(a.to);
    bool resolved = true;
    if (!from_place && !from_trans) {
      report(a.pos, fmt::format("reference to undeclared place or transition '{}'", a.from));
      resolved = false;
    }
    if (!to_place && !to_trans) {
      report(a.pos, fmt::format("reference to undeclared place or transition '{}'", a.to));
      resolved = false;
    }
    if (!resolved) continue;

    NodeId from_owner = kRoot, to_owner = kRoot;
    switch (a.kind) {
      case ArcKind::P2T:
      case ArcKind::Inhibitor:
      case ArcKind::Reset:
        if (!from_place || !to_trans) {
          report(a.pos, fmt::format("'{}' arc must connect a place to a transition", arc_operator(a.kind)));
          continue;
        }
        from_owner = from_place->owner;
        to_owner = to_trans->owner;
        break;
      case ArcKind::T2P:
        if (!from_trans || !to_place) {
          report(a.pos, "'->' arc must connect a place and a transition");
          continue;
        }
        from_owner = from_trans->owner;
        to_owner = to_place->owner;
        break;
      case ArcKind::Timing:
        if (!from_trans || !to_trans) {
          report(a.pos, "'-<>' arc must connect two transitions");
          continue;
        }
        from_owner = from_trans->owner;
        to_owner = to_trans->owner;
        break;
    }
    if ((a.kind == ArcKind::P2T || a.kind == ArcKind::Inhibitor) && from_place->lifetime) {
      report(a.pos, fmt::format("timed place '{}' only accepts '->' from transitions and '->>'", a.from));
    }
    if (a.kind == ArcKind::Timing && !a.timing_param) report(a.pos, "timing arc requires a timing parameter");
    if (a.kind != ArcKind::Timing && a.timing_param) report(a.pos, "only timing arcs take a timing parameter");
    if (a.timing_param && !timings.contains(*a.timing_param)) {
      report(a.pos, fmt::format("undeclared timing parameter '{}'", *a.timing_param));
    }
    if (!a.scope.is_default()) {
      bool ok = a.kind == ArcKind::Timing ||
                (a.kind == ArcKind::Reset && a.scope.kind != ScopeKind::Sibling);
      if (!ok) {
        report(a.pos, fmt::format("scope qualifier '{}' not allowed on {} arcs", scope_suffix(a.scope),
                                  arc_kind_name(a.kind)));
      }
    }
    auto pa = spec.path_to(from_owner);
    auto pb = spec.path_to(to_owner);
    std::size_t shared = 0;
    while (shared < pa.size() && shared < pb.size() && pa[shared] == pb[shared]) ++shared;
    if (a.kind != ArcKind::Timing && shared != std::min(pa.size(), pb.size())) {
      report(a.pos, fmt::format("arc '{} {} {}' connects unrelated hierarchies", a.from, arc_operator(a.kind), a.to));
    }
    if (!a.scope.level.empty()) {
      auto lvl = spec.find_hierarchy(a.scope.level);
      if (!lvl) {
        report(a.pos, fmt::format("unknown hierarchy '{}' in scope qualifier", a.scope.level));
      } else if (std::find(pa.begin(), pa.begin() + static_cast<std::ptrdiff_t>(shared), *lvl) ==
                 pa.begin() + static_cast<std::ptrdiff_t>(shared)) {
        report(a.pos, fmt::format("hierarchy '{}' does not enclose both arc endpoints", a.scope.level));
      }
    } else if (a.scope.kind == ScopeKind::Sibling && shared == 0) {
      report(a.pos, "sibling scope requires endpoints sharing a hierarchy");
    }
    if (!arcs.insert({a.kind, a.from, a.to, a.scope}).second) {
      report(a.pos, fmt::format("duplicate arc '{} {} {}{}'", a.from, arc_operator(a.kind), a.to,
                                a.scope.is_default() ? "" : " " + scope_suffix(a.scope)));
    }
    if (a.kind == ArcKind::T2P) t2p.insert({a.to, a.from});
    if (a.kind == ArcKind::P2T) p2t.insert({a.from, a.to});
    if (a.kind == ArcKind::Reset) resets.insert({a.from, a.to});
  }
  for (const auto& a : spec.arcs) {
    if (a.kind == ArcKind::Reset && t2p.contains({a.from, a.to})) {
      report(a.pos, fmt::format("transition '{}' both produces into and resets place '{}'", a.to, a.from));
    } else if (a.kind == ArcKind::Reset && p2t.contains({a.from, a.to})) {
      report(a.pos, fmt::format("transition '{}' both consumes from and resets place '{}'", a.to, a.from));
    }
  }
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& x, const Diagnostic& y) {
    return std::tie(x.pos.line, x.pos.column) < std::tie(y.pos.line, y.pos.column);
  });
  return diags;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_body(const NetSpec& spec, NodeId owner, int indent, std::string& out) {
  std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
  std::string inner(static_cast<std::size_t>(indent + 1) * 4, ' ');
  bool any_places = false;
  for (const auto& p : spec.places) {
    if (p.owner != owner) continue;
    if (!any_places) out += pad + "Places {\n";
    any_places = true;
    out += inner + p.name;
    if (p.explicit_capacity || p.capacity != 1) out += fmt::format(" capacity({})", p.capacity);
    if (p.lifetime) out += fmt::format(" lifetime({})", *p.lifetime);
    if (p.initial_tokens != 0) out += fmt::format(" init({})", p.initial_tokens);
    out += ";\n";
  }
  if (any_places) out += pad + "}\n";
  bool any_trans = false;
  for (const auto& t : spec.transitions) {
    if (t.owner != owner) continue;
    if (!any_trans) out += pad + "Transitions {\n";
    any_trans = true;
    out += inner + t.name + ";\n";
  }
  if (any_trans) out += pad + "}\n";
  for (std::size_t i = 0; i < spec.hierarchies.size(); ++i) {
    const auto& h = spec.hierarchies[i];
    if (h.parent != owner) continue;
    out += fmt::format("{}{} : {} {{\n", pad, h.count_param, h.name);
    render_body(spec, static_cast<NodeId>(i), indent + 1, out);
    out += pad + "}\n";
  }
}

}  // namespace

std::string render(const NetSpec& spec) {
  std::string out;
  if (!spec.standard_name.empty()) out += "standard " + spec.standard_name + ";\n\n";
  if (!spec.timing_params.empty()) {
    out += "Timings {\n";
    for (const auto& t : spec.timing_params) out += "    " + t.name + ";\n";
    out += "}\n\n";
  }
  if (!spec.arcs.empty()) {
    out += "Arcs {\n";
    for (const auto& a : spec.arcs) {
      out += fmt::format("    {} {} {}", a.from, arc_operator(a.kind), a.to);
      if (a.timing_param) out += " (" + *a.timing_param + ")";
      if (!a.scope.is_default()) out += " " + scope_suffix(a.scope);
      out += ";\n";
    }
    out += "}\n\n";
  }
  render_body(spec, kRoot, 0, out);
  return out;
}

namespace {

std::string owner_path(const NetSpec& spec, NodeId owner) {
  std::string s;
  for (NodeId n : spec.path_to(owner)) {
    const auto& h = spec.hierarchies[static_cast<std::size_t>(n)];
    s += "/" + h.count_param + ":" + h.name;
  }
  return s;
}

auto normalized(const NetSpec& spec) {
  std::vector<std::string> hier, places, trans, arcs, timings;
  for (std::size_t i = 0; i < spec.hierarchies.size(); ++i) {
    hier.push_back(owner_path(spec, static_cast<NodeId>(i)));
  }
  for (const auto& p : spec.places) {
    places.push_back(fmt::format("{}|{}|{}|{}|{}", p.name, owner_path(spec, p.owner), p.capacity,
                                 p.lifetime.value_or(""), p.initial_tokens));
  }
  for (const auto& t : spec.transitions) trans.push_back(t.name + "|" + owner_path(spec, t.owner));
  for (const auto& a : spec.arcs) {
    arcs.push_back(fmt::format("{}|{}|{}|{}|{}", arc_kind_name(a.kind), a.from, a.to,
                               a.timing_param.value_or(""), scope_suffix(a.scope)));
  }
  for (const auto& t : spec.timing_params) timings.push_back(t.name);
  for (auto* v : {&hier, &places, &trans, &arcs, &timings}) std::sort(v->begin(), v->end());
  return std::tuple{spec.standard_name, hier, places, trans, arcs, timings};
}

}  // namespace

bool structurally_equal(const NetSpec& a, const NetSpec& b) { return normalized(a) == normalized(b); }

}  // namespace dramv
