#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "dramv/properties.hpp"

namespace dramv {

std::string SignalMap::coordinate_port(const std::string& hierarchy) const {
  auto it = coordinate.find(hierarchy);
  return it == coordinate.end() ? "cmd_" + hierarchy : it->second;
}

SignalMap parse_signal_map(std::string_view text, const std::string& origin) {
  SignalMap map;
  std::vector<Diagnostic> diags;
  for (const auto& kv : parse_key_values(text, origin)) {
    if (kv.key == "format") continue;
    if (kv.key == "module") {
      map.module_name = kv.value;
    } else if (kv.key == "clock") {
      map.clock = kv.value;
    } else if (kv.key == "reset") {
      map.reset = kv.value;
    } else if (kv.key == "command") {
      map.command = kv.value;
    } else if (kv.key == "command_width") {
      map.command_width = static_cast<std::uint32_t>(std::stoul(kv.value));
    } else if (kv.key.starts_with("coord.")) {
      map.coordinate[kv.key.substr(6)] = kv.value;
    } else {
      diags.push_back({{kv.line, 1}, fmt::format("unknown signal map key '{}'", kv.key)});
    }
  }
  if (!diags.empty()) throw ParseError(origin, std::move(diags));
  return map;
}

namespace {

std::uint32_t bits_for(std::uint64_t values) {
  std::uint32_t w = 1;
  while ((std::uint64_t{1} << w) < values) ++w;
  return w;
}

class SvaWriter {
 public:
  SvaWriter(const PropertySet& props, const SignalMap& sig) : props_(props), sig_(sig), topo_(props.topology) {}

  std::string run() {
    std::string module = sig_.module_name;
    if (module.empty()) {
      module = props_.model + (props_.config.name.empty() ? "" : "_" + props_.config.name) + "_props";
      for (auto& c : module) c = std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
    }
    std::uint32_t cmd_width = sig_.command_width ? sig_.command_width : bits_for(props_.command_kinds.size());

    line(0, fmt::format("// SystemVerilog assertions for {} ({})", props_.model,
                        props_.config.name.empty() ? "unnamed config" : props_.config.name));
    line(0, "// Generated by dramv. Do not edit.");
    line(0, "");
    line(0, fmt::format("module {} (", module));
    std::vector<std::string> ports{fmt::format("input logic {}", sig_.clock), fmt::format("input logic {}", sig_.reset),
                                   fmt::format("input logic [{}:0] {}", cmd_width - 1, sig_.command)};
    for (std::size_t n = 0; n < topo_.node_count(); ++n) {
      auto node = static_cast<NodeId>(n);
      ports.push_back(fmt::format("input logic [{}:0] {}", bits_for(topo_.count(node)) - 1,
                                  sig_.coordinate_port(topo_.name(node))));
    }
    for (std::size_t i = 0; i < ports.size(); ++i) line(1, ports[i] + (i + 1 < ports.size() ? "," : ""));
    line(0, ");");
    line(0, "");
    for (std::size_t i = 0; i < props_.command_kinds.size(); ++i) {
      line(1, fmt::format("localparam logic [{}:0] {} = {}'d{};", cmd_width - 1, props_.command_kinds[i], cmd_width, i));
    }
    line(0, "");
    for (std::size_t n = 0; n < topo_.node_count(); ++n) {
      line(1, fmt::format("localparam int {} = {};", count_name(static_cast<NodeId>(n)), topo_.count(static_cast<NodeId>(n))));
    }
    bool windows = std::any_of(props_.places.begin(), props_.places.end(), [](auto& p) { return p.lifetime != 0; });
    if (windows) {
      line(0, "");
      line(1, "// Free-running cycle counter for windowed constraints");
      line(1, "logic [31:0] cycle_count;");
      line(1, fmt::format("always @(posedge {}) begin", sig_.clock));
      line(2, fmt::format("if ({})", sig_.reset));
      line(3, "cycle_count <= '0;");
      line(2, "else");
      line(3, "cycle_count <= cycle_count + 1'b1;");
      line(1, "end");
    }
    line(0, "");
    emit_scope(kRoot, 1);
    bool any_hier = topo_.node_count() > 0;
    if (any_hier) {
      for (std::size_t n = 0; n < topo_.node_count(); ++n) {
        line(1, fmt::format("genvar {}_id;", topo_.name(static_cast<NodeId>(n))));
      }
      line(1, "generate");
      for (std::size_t n = 0; n < topo_.node_count(); ++n) {
        if (topo_.depth(static_cast<NodeId>(n)) == 1) emit_loop(static_cast<NodeId>(n), 2);
      }
      line(1, "endgenerate");
    }
    line(0, "");
    line(0, "endmodule");
    return std::move(out_);
  }

 private:
  void line(int indent, const std::string& text) {
    if (!text.empty()) out_.append(static_cast<std::size_t>(indent) * 4, ' ');
    out_ += text;
    out_ += '\n';
  }

  std::string count_name(NodeId node) const {
    const std::string& param = topo_.count_param(node);
    if (!param.empty() && !std::isdigit(static_cast<unsigned char>(param[0]))) return param;
    return "num_" + topo_.name(node);
  }

  std::string match(const CommandMatch& m) const {
    std::string s = fmt::format("{} == {}", sig_.command, m.command);
    for (const auto& t : m.tests) {
      s += fmt::format(" && {} {} {}_id", sig_.coordinate_port(topo_.name(t.level)), t.equal ? "==" : "!=",
                       topo_.name(t.level));
    }
    return s;
  }

  void emit_loop(NodeId node, int indent) {
    const std::string& h = topo_.name(node);
    line(indent, fmt::format("for ({0}_id = 0; {0}_id < {1}; {0}_id++) begin : {0}_gen", h, count_name(node)));
    emit_scope(node, indent + 1);
    for (std::size_t n = 0; n < topo_.node_count(); ++n) {
      auto child = static_cast<NodeId>(n);
      const auto& path = topo_.path(child);
      if (path.size() == topo_.depth(node) + 1 && path[path.size() - 2] == node) emit_loop(child, indent + 1);
    }
    line(indent, "end");
  }

  void emit_scope(NodeId node, int indent) {
    for (const auto& rule : props_.places) {
      if (rule.owner == node) emit_place(rule, indent);
    }
    for (const auto& prop : props_.properties) {
      if (prop.scope == node) emit_property(prop, indent);
    }
  }

  void emit_place(const PlaceRule& rule, int indent) {
    const std::string& p = rule.place;
    const std::string clk = sig_.clock;
    if (rule.lifetime == 0) {
      std::uint32_t w = bits_for(std::uint64_t{rule.capacity} + 1);
      line(indent, w == 1 ? fmt::format("logic {};", p) : fmt::format("logic [{}:0] {};", w - 1, p));
      line(indent, fmt::format("always @(posedge {}) begin", clk));
      line(indent + 1, fmt::format("if ({})", sig_.reset));
      line(indent + 2, rule.initial_tokens == 0 ? fmt::format("{} <= {}'b0;", p, w)
                                                : fmt::format("{} <= {}'d{};", p, w, rule.initial_tokens));
      line(indent + 1, "else begin");
      bool first = true;
      auto branch = [&](const CommandMatch& m, const std::string& update) {
        line(indent + 2, fmt::format("{}if ({})", first ? "" : "else ", match(m)));
        line(indent + 3, update);
        first = false;
      };
      // A command kind lands in at most one branch: self loops are dropped and
      // validation rejects reset together with another arc on the same pair.
      for (const auto& m : rule.increments) {
        branch(m, fmt::format("{0} <= ({0} == {1}'d{2}) ? {0} : {0} + 1'b1;", p, w, rule.capacity));
      }
      for (const auto& m : rule.decrements) branch(m, fmt::format("{0} <= ({0} == '0) ? {0} : {0} - 1'b1;", p));
      for (const auto& m : rule.resets) branch(m, fmt::format("{} <= {}'b0;", p, w));
      line(indent + 1, "end");
      line(indent, "end");
    } else {
      std::uint32_t w = bits_for(std::uint64_t{rule.capacity} + 1);
      line(indent, fmt::format("// {}: timed place, capacity {}, token lifetime {} cycles", p, rule.capacity, rule.lifetime));
      line(indent, fmt::format("logic [31:0] {}_fire [{}];", p, rule.capacity));
      line(indent, fmt::format("logic [{}:0] {}_count;", w - 1, p));
      line(indent, fmt::format("always @(posedge {}) begin", clk));
      line(indent + 1, fmt::format("if ({})", sig_.reset));
      line(indent + 2, fmt::format("{}_count <= '0;", p));
      line(indent + 1, "else begin");
      bool first = true;
      for (const auto& m : rule.resets) {
        line(indent + 2, fmt::format("{}if ({})", first ? "" : "else ", match(m)));
        line(indent + 3, fmt::format("{}_count <= '0;", p));
        first = false;
      }
      for (const auto& m : rule.increments) {
        line(indent + 2, fmt::format("{}if ({}) begin", first ? "" : "else ", match(m)));
        line(indent + 3, fmt::format("{}_fire[0] <= cycle_count;", p));
        line(indent + 3, fmt::format("for (int i = 1; i < {}; i++) {}_fire[i] <= {}_fire[i - 1];", rule.capacity, p, p));
        line(indent + 3, fmt::format("{0}_count <= ({0}_count == {1}'d{2}) ? {0}_count : {0}_count + 1'b1;", p, w,
                                     rule.capacity));
        line(indent + 2, "end");
        first = false;
      }
      line(indent + 1, "end");
      line(indent, "end");
    }
    line(0, "");
  }

  void emit_property(const Property& prop, int indent) {
    const std::string& id = prop.unique_id;
    const std::string head = fmt::format("@(posedge {}) disable iff ({})", sig_.clock, sig_.reset);
    switch (prop.kind) {
      case PropertyKind::Arc:
        line(indent, fmt::format("property {};", id));
        line(indent + 1, head);
        line(indent + 2, fmt::format("({}) |-> ({} >= 1'b1);", match(prop.trigger), prop.place));
        line(indent, "endproperty;");
        line(indent, fmt::format("assert property({});", id));
        break;
      case PropertyKind::Inhibitor:
        line(indent, fmt::format("property {};", id));
        line(indent + 1, head);
        line(indent + 2, fmt::format("({} >= 1'b1) |-> not ({});", prop.place, match(prop.trigger)));
        line(indent, "endproperty;");
        line(indent, fmt::format("assert property(@(posedge {}) {});", sig_.clock, id));
        break;
      case PropertyKind::Timing:
        if (prop.timing_value <= 1) {
          line(indent, fmt::format("// {}: vacuous, {} = {} leaves an empty window ##[1:0]", id,
                                   prop.timing_param.value_or("timing"), prop.timing_value));
          break;
        }
        line(indent, fmt::format("property {};", id));
        line(indent + 1, head);
        line(indent + 2, fmt::format("({}) |->", match(prop.trigger)));
        line(indent + 4, fmt::format("not ##[1:({} - 1)] ({});", prop.timing_value, match(prop.target)));
        line(indent, "endproperty;");
        line(indent, fmt::format("assert property({});", id));
        break;
      case PropertyKind::Window: {
        if (prop.feeders.empty()) {
          line(indent, fmt::format("// {}: vacuous, no transition feeds {}", id, prop.place));
          break;
        }
        std::string feed;
        for (const auto& f : prop.feeders) feed += (feed.empty() ? "(" : " || (") + match(f) + ")";
        if (prop.feeders.size() > 1) feed = "(" + feed + ")";
        line(indent, fmt::format("property {};", id));
        line(indent + 1, head);
        line(indent + 2, fmt::format("({} && {}_count == {}) |->", feed, prop.place, prop.max_count));
        line(indent + 4, fmt::format("(cycle_count - {}_fire[{}] >= {});", prop.place, prop.max_count - 1,
                                     prop.window_cycles));
        line(indent, "endproperty;");
        line(indent, fmt::format("assert property({});", id));
        break;
      }
    }
    line(0, "");
  }

  const PropertySet& props_;
  const SignalMap& sig_;
  const Topology& topo_;
  std::string out_;
};

}  // namespace

std::string emit_sva(const PropertySet& props, const SignalMap& signals) {
  SvaWriter w(props, signals);
  return w.run();
}

}  // namespace dramv
