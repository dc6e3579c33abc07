#include "dramv/trace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <deque>
#include <future>
#include <sstream>
#include <unordered_map>

namespace dramv {

std::vector<Command> CommandTrace::commands() const {
  std::vector<Command> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.command);
  return out;
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Holds:
      return "HOLDS";
    case Status::Violated:
      return "VIOLATED";
    case Status::NotActivated:
      return "NOT_ACTIVATED";
  }
  return "?";
}

std::size_t VerdictReport::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [&](const PropertyVerdict& v) { return v.status == s; }));
}

const PropertyVerdict* VerdictReport::find(std::string_view unique_id) const {
  for (const auto& v : verdicts) {
    if (v.unique_id == unique_id) return &v;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CommandTrace load_trace(std::string_view text, const PropertySet& props, const std::string& origin) {
  CommandTrace trace;
  trace.origin = origin;
  std::vector<Diagnostic> diags;
  std::unordered_map<std::string_view, std::size_t> kinds;
  for (std::size_t i = 0; i < props.command_kinds.size(); ++i) kinds.emplace(props.command_kinds[i], i);

  std::size_t line_no = 0;
  std::optional<Cycle> last_cycle;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    SourcePos pos{line_no, 1};

    if (line.find('=') != std::string_view::npos) {
      if (!trace.records.empty()) {
        diags.push_back({pos, "header line after the first command record"});
        continue;
      }
      auto eq = line.find('=');
      auto key = split_ws(line.substr(0, eq));
      auto value = split_ws(line.substr(eq + 1));
      if (key.size() != 1 || value.size() != 1) {
        diags.push_back({pos, "malformed header line"});
        continue;
      }
      if (key[0] == "format" && value[0] != "1") diags.push_back({pos, fmt::format("unsupported format '{}'", value[0])});
      trace.header.push_back({std::string(key[0]), std::string(value[0]), line_no});
      continue;
    }

    Command cmd;
    if (fields.size() < 2 || !parse_uint(fields[0], cmd.cycle)) {
      diags.push_back({pos, "malformed record, expected '<cycle> <CMD> [<coord> ...]'"});
      continue;
    }
    cmd.kind = std::string(fields[1]);
    auto kind = kinds.find(fields[1]);
    if (kind == kinds.end()) {
      diags.push_back({pos, fmt::format("unknown command kind '{}'", fields[1])});
      continue;
    }
    bool ok = true;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      std::uint32_t c = 0;
      if (!parse_uint(fields[i], c)) {
        diags.push_back({pos, fmt::format("malformed coordinate '{}'", fields[i])});
        ok = false;
        break;
      }
      cmd.coords.push_back(c);
    }
    if (!ok) continue;
    NodeId owner = props.command_owners[kind->second];
    const auto& path = props.topology.path(owner);
    if (cmd.coords.size() != path.size()) {
      diags.push_back({pos, fmt::format("{} takes {} coordinate(s), found {}", cmd.kind, path.size(), cmd.coords.size())});
      continue;
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (cmd.coords[i] >= props.topology.count(path[i])) {
        diags.push_back({pos, fmt::format("{} coordinate {} out of range (0..{})", props.topology.name(path[i]),
                                          cmd.coords[i], props.topology.count(path[i]) - 1)});
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (last_cycle && cmd.cycle == *last_cycle) {
      diags.push_back({pos, fmt::format("duplicate cycle {} (one command per cycle)", cmd.cycle)});
      continue;
    }
    if (last_cycle && cmd.cycle < *last_cycle) {
      diags.push_back({pos, fmt::format("non-monotone cycle {} after {}", cmd.cycle, *last_cycle)});
      continue;
    }
    last_cycle = cmd.cycle;
    trace.records.push_back({std::move(cmd), line_no});
  }
  if (!diags.empty()) throw ParseError(origin, std::move(diags));
  return trace;
}

std::string render_trace(const std::vector<Command>& commands, const std::vector<KeyValue>& header) {
  std::string out;
  for (const auto& kv : header) out += kv.key + "=" + kv.value + "\n";
  for (const auto& c : commands) {
    out += fmt::format("{} {}", c.cycle, c.kind);
    for (auto x : c.coords) out += fmt::format(" {}", x);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct CompiledMatch {
  std::vector<std::pair<std::size_t, bool>> tests;  // (path position, equal)
};

CompiledMatch compile(const Topology& topo, const CommandMatch& m) {
  CompiledMatch c;
  for (const auto& t : m.tests) c.tests.push_back({topo.depth(t.level) - 1, t.equal});
  return c;
}

enum class Role { Trigger, Target, Feeder, Reset, Increment, Decrement };

struct Hook {
  Role role;
  std::size_t index;  // property or place rule
  CompiledMatch match;
};

struct Accumulator {
  std::size_t activations = 0;
  std::size_t violations = 0;
  std::optional<Witness> witness;
  std::optional<Cycle> min_gap;
};

class Evaluator {
 public:
  explicit Evaluator(const PropertySet& props) : props_(props), topo_(props.topology) {
    for (std::size_t i = 0; i < props.command_kinds.size(); ++i) kind_index_.emplace(props.command_kinds[i], i);
    hooks_.resize(props.command_kinds.size());
    place_hooks_.resize(props.command_kinds.size());
    trigger_hooks_.resize(props.command_kinds.size());
    auto kind_of = [&](const CommandMatch& m) { return kind_index_.at(m.command); };
    for (std::size_t p = 0; p < props.properties.size(); ++p) {
      const auto& prop = props.properties[p];
      switch (prop.kind) {
        case PropertyKind::Arc:
        case PropertyKind::Inhibitor:
          hooks_[kind_of(prop.trigger)].push_back({Role::Trigger, p, compile(topo_, prop.trigger)});
          break;
        case PropertyKind::Timing:
          // Triggers are recorded after all checks, so a command that is both
          // target and trigger is measured against the previous trigger.
          hooks_[kind_of(prop.target)].push_back({Role::Target, p, compile(topo_, prop.target)});
          trigger_hooks_[kind_of(prop.trigger)].push_back({Role::Trigger, p, compile(topo_, prop.trigger)});
          break;
        case PropertyKind::Window:
          for (const auto& f : prop.feeders) hooks_[kind_of(f)].push_back({Role::Feeder, p, compile(topo_, f)});
          break;
      }
    }
    for (std::size_t r = 0; r < props.places.size(); ++r) {
      const auto& rule = props.places[r];
      for (const auto& m : rule.decrements) place_hooks_[kind_of(m)].push_back({Role::Decrement, r, compile(topo_, m)});
      for (const auto& m : rule.increments) place_hooks_[kind_of(m)].push_back({Role::Increment, r, compile(topo_, m)});
      for (const auto& m : rule.resets) place_hooks_[kind_of(m)].push_back({Role::Reset, r, compile(topo_, m)});
      place_index_.emplace(rule.place, r);
    }
    // Flat index of the place instance read by each arc/inhibitor property instance.
    place_of_instance_.resize(props.properties.size());
    for (std::size_t p = 0; p < props.properties.size(); ++p) {
      const auto& prop = props.properties[p];
      if (prop.kind != PropertyKind::Arc && prop.kind != PropertyKind::Inhibitor) continue;
      std::size_t depth = topo_.depth(prop.place_owner);
      for (const auto& inst : prop.instances) {
        place_of_instance_[p].push_back(
            topo_.flat_index(prop.place_owner, std::span<const std::uint32_t>(inst.data(), depth)));
      }
    }
  }

  std::vector<Accumulator> run(const CommandTrace& trace, std::size_t trace_index, std::vector<std::size_t>& bad) {
    reset_state();
    std::vector<Accumulator> acc(props_.properties.size());
    for (std::size_t r = 0; r < trace.records.size(); ++r) {
      const auto& rec = trace.records[r];
      const Command& cmd = rec.command;
      auto k = kind_index_.find(cmd.kind);
      if (k == kind_index_.end()) throw Error(fmt::format("command kind '{}' unknown to model {}", cmd.kind, props_.model));
      NodeId owner = props_.command_owners[k->second];
      if (!topo_.in_range(owner, cmd.coords)) {
        throw Error(fmt::format("coordinates of {} at cycle {} out of range", cmd.kind, cmd.cycle));
      }
      bool violated = false;
      auto violate = [&](std::size_t p, std::size_t inst, std::string why) {
        violated = true;
        auto& a = acc[p];
        ++a.violations;
        if (!a.witness) a.witness = Witness{trace_index, r, rec.line, cmd, props_.properties[p].instances[inst], std::move(why)};
      };

      for (const auto& hook : hooks_[k->second]) {
        const auto& prop = props_.properties[hook.index];
        for (std::size_t inst : matching(prop.scope, hook.match, cmd.coords)) {
          auto& a = acc[hook.index];
          switch (hook.role) {
            case Role::Trigger: {
              ++a.activations;
              std::uint32_t tokens = values_[place_index_.at(prop.place)][place_of_instance_[hook.index][inst]];
              if (prop.kind == PropertyKind::Arc && tokens == 0) {
                violate(hook.index, inst, fmt::format("{} issued while {} holds no token", cmd.kind, prop.place));
              } else if (prop.kind == PropertyKind::Inhibitor && tokens >= 1) {
                violate(hook.index, inst, fmt::format("{} issued while {} holds {} token(s)", cmd.kind, prop.place, tokens));
              }
              break;
            }
            case Role::Target: {
              const auto& last = last_trigger_[hook.index][inst];
              if (!last) break;
              ++a.activations;
              Cycle gap = cmd.cycle - *last;
              a.min_gap = a.min_gap ? std::min(*a.min_gap, gap) : gap;
              if (gap < prop.timing_value) {
                violate(hook.index, inst,
                        fmt::format("{} {} cycle(s) after {} (needs {} = {})", cmd.kind, gap, prop.trigger.command,
                                    prop.timing_param.value_or("timing"), prop.timing_value));
              }
              break;
            }
            case Role::Feeder: {
              ++a.activations;
              const auto& fires = fires_[place_index_.at(prop.place)][inst];
              if (fires.size() >= prop.max_count && cmd.cycle - fires[fires.size() - prop.max_count] < prop.window_cycles) {
                violate(hook.index, inst,
                        fmt::format("{} would be fire {} of {} within {} cycles", cmd.kind, prop.max_count + 1,
                                    prop.place, prop.window_cycles));
              }
              break;
            }
            default:
              break;
          }
        }
      }
      for (const auto& hook : trigger_hooks_[k->second]) {
        const auto& prop = props_.properties[hook.index];
        for (std::size_t inst : matching(prop.scope, hook.match, cmd.coords)) last_trigger_[hook.index][inst] = cmd.cycle;
      }
      for (const auto& hook : place_hooks_[k->second]) {
        const auto& rule = props_.places[hook.index];
        auto& values = values_[hook.index];
        auto& fires = fires_[hook.index];
        for (std::size_t inst : matching(rule.owner, hook.match, cmd.coords)) {
          switch (hook.role) {
            case Role::Decrement:
              if (values[inst] > 0) --values[inst];
              break;
            case Role::Increment:
              if (rule.lifetime != 0) {
                fires[inst].push_back(cmd.cycle);
                if (fires[inst].size() > rule.capacity) fires[inst].pop_front();
              } else if (values[inst] < rule.capacity) {
                ++values[inst];
              }
              break;
            case Role::Reset:
              values[inst] = 0;
              if (rule.lifetime != 0) fires[inst].clear();
              break;
            default:
              break;
          }
        }
      }
      if (violated) bad.push_back(r);
    }
    return acc;
  }

 private:
  void reset_state() {
    values_.clear();
    fires_.clear();
    for (const auto& rule : props_.places) {
      std::size_t n = topo_.instance_count(rule.owner);
      values_.emplace_back(n, rule.lifetime == 0 ? rule.initial_tokens : 0);
      fires_.emplace_back(rule.lifetime == 0 ? 0 : n);
    }
    last_trigger_.clear();
    for (const auto& prop : props_.properties) last_trigger_.emplace_back(prop.instances.size());
  }

  /// Flat indices of the instances of `scope` whose generate indices satisfy `m` for `coords`.
  const std::vector<std::size_t>& matching(NodeId scope, const CompiledMatch& m, const Coords& coords) {
    const auto& path = topo_.path(scope);
    scratch_.clear();
    scratch_.push_back(0);
    for (std::size_t d = 0; d < path.size(); ++d) {
      std::uint32_t n = topo_.count(path[d]);
      auto test = std::find_if(m.tests.begin(), m.tests.end(), [&](auto& t) { return t.first == d; });
      next_.clear();
      for (std::size_t base : scratch_) {
        for (std::uint32_t v = 0; v < n; ++v) {
          if (test != m.tests.end() && (v == coords[d]) != test->second) continue;
          next_.push_back(base * n + v);
        }
      }
      scratch_.swap(next_);
    }
    return scratch_;
  }

  const PropertySet& props_;
  const Topology& topo_;
  std::unordered_map<std::string, std::size_t> kind_index_;
  std::unordered_map<std::string, std::size_t> place_index_;
  std::vector<std::vector<Hook>> hooks_, trigger_hooks_, place_hooks_;
  std::vector<std::vector<std::size_t>> place_of_instance_;
  std::vector<std::vector<std::uint32_t>> values_;
  std::vector<std::vector<std::deque<Cycle>>> fires_;
  std::vector<std::vector<std::optional<Cycle>>> last_trigger_;
  std::vector<std::size_t> scratch_, next_;
};

void check_header(const PropertySet& props, const CommandTrace& trace) {
  for (const auto& kv : trace.header) {
    if (kv.key == "standard" && !props.model.empty() && kv.value != props.model) {
      throw Error(fmt::format("{}: trace is for standard '{}', properties for '{}'", trace.origin, kv.value, props.model));
    }
    for (std::size_t n = 0; n < props.topology.node_count(); ++n) {
      auto node = static_cast<NodeId>(n);
      if (kv.key == props.topology.count_param(node) && kv.value != std::to_string(props.topology.count(node))) {
        throw Error(fmt::format("{}: config mismatch, trace has {}={}, properties use {}", trace.origin, kv.key,
                                kv.value, props.topology.count(node)));
      }
    }
  }
}

}  // namespace

VerdictReport check(const PropertySet& props, const CommandTrace& trace) {
  return check(props, std::span<const CommandTrace>(&trace, 1));
}

VerdictReport check(const PropertySet& props, std::span<const CommandTrace> corpus, unsigned workers) {
  for (const auto& t : corpus) check_header(props, t);

  struct Result {
    std::vector<Accumulator> acc;
    std::vector<std::size_t> bad;
  };
  std::vector<Result> results(corpus.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    Evaluator ev(props);
    for (std::size_t i = begin; i < corpus.size(); i += stride) results[i].acc = ev.run(corpus[i], i, results[i].bad);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, corpus.size()))));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, work, w, workers));
    for (auto& f : futures) f.get();
  }

  VerdictReport report;
  report.model = props.model;
  report.config_name = props.config.name;
  report.command_kinds = props.command_kinds;
  report.traces = corpus.size();
  for (const auto& t : corpus) report.records += t.records.size();
  for (std::size_t p = 0; p < props.properties.size(); ++p) {
    const auto& prop = props.properties[p];
    PropertyVerdict v;
    v.unique_id = prop.unique_id;
    v.kind = prop.kind;
    v.commands = prop.commands();
    v.scope = prop.scope_qualifier;
    v.generated = prop.generated();
    v.timing_param = prop.timing_param;
    v.timing_value = prop.kind == PropertyKind::Window ? prop.window_cycles : prop.timing_value;
    for (const auto& r : results) {
      const auto& a = r.acc[p];
      v.activations += a.activations;
      v.violations += a.violations;
      if (!v.witness && a.witness) v.witness = a.witness;
      if (a.min_gap) v.min_gap = v.min_gap ? std::min(*v.min_gap, *a.min_gap) : *a.min_gap;
    }
    v.status = v.violations > 0 ? Status::Violated : v.activations > 0 ? Status::Holds : Status::NotActivated;
    if (prop.kind == PropertyKind::Timing && v.min_gap) {
      v.slack = static_cast<std::int64_t>(*v.min_gap) - static_cast<std::int64_t>(prop.timing_value);
    }
    report.verdicts.push_back(std::move(v));
  }
  for (auto& r : results) report.violating_records.push_back(std::move(r.bad));
  return report;
}

FeatureCoverageSummary coverage(const VerdictReport& report) {
  FeatureCoverageSummary s;
  for (const auto& k : report.command_kinds) {
    s.activations[k] = 0;
    s.not_activated[k];
  }
  for (const auto& v : report.verdicts) {
    for (const auto& c : v.commands) {
      s.activations[c] += v.activations;
      if (v.status == Status::NotActivated) s.not_activated[c].push_back(v.unique_id);
    }
  }
  for (const auto& k : report.command_kinds) {
    if (s.activations[k] == 0) s.unexercised.push_back(k);
  }
  return s;
}

}  // namespace dramv
