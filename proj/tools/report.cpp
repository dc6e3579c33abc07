#include "report.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <cstdlib>

namespace dramv::report {

namespace {

Json header(std::string_view command) {
  Json j;
  j["format"] = 1;
  j["command"] = command;
  return j;
}

Json witness_json(const Witness& w, const std::vector<std::string>& names) {
  Json j;
  j["trace"] = w.trace < names.size() ? names[w.trace] : std::to_string(w.trace);
  j["line"] = w.line;
  j["cycle"] = w.command.cycle;
  j["command"] = w.command.kind;
  j["coords"] = w.command.coords;
  j["instance"] = w.instance;
  j["constraint"] = w.constraint;
  return j;
}

std::string coords_str(const Coords& c) {
  return c.empty() ? "-" : fmt::format("{}", fmt::join(c, "/"));
}

}  // namespace

bool use_color() {
  const char* no = std::getenv("NO_COLOR");
  if (no && *no) return false;
  return isatty(STDOUT_FILENO) != 0;
}

Json check_json(const VerdictReport& r, const std::vector<std::string>& trace_names) {
  Json j = header("check");
  j["model"] = r.model;
  j["config"] = r.config_name;
  j["traces"] = trace_names;
  j["records"] = r.records;
  j["summary"] = {{"properties", r.verdicts.size()},
                  {"holds", r.count(Status::Holds)},
                  {"violated", r.count(Status::Violated)},
                  {"not_activated", r.count(Status::NotActivated)}};
  Json props = Json::array();
  for (const auto& v : r.verdicts) {
    Json p;
    p["id"] = v.unique_id;
    p["kind"] = property_kind_name(v.kind);
    p["status"] = status_name(v.status);
    p["commands"] = v.commands;
    p["scope"] = scope_suffix(v.scope);
    p["generated"] = v.generated;
    p["activations"] = v.activations;
    p["violations"] = v.violations;
    p["timing_param"] = v.timing_param ? Json(*v.timing_param) : Json(nullptr);
    p["timing_value"] = v.kind == PropertyKind::Timing || v.kind == PropertyKind::Window ? Json(v.timing_value) : Json(nullptr);
    p["min_gap"] = v.min_gap ? Json(*v.min_gap) : Json(nullptr);
    p["slack"] = v.slack ? Json(*v.slack) : Json(nullptr);
    p["witness"] = v.witness ? witness_json(*v.witness, trace_names) : Json(nullptr);
    props.push_back(std::move(p));
  }
  j["properties"] = std::move(props);
  return j;
}

std::string check_text(const VerdictReport& r, const std::vector<std::string>& trace_names, bool color) {
  std::string out = fmt::format("model {}  config {}  traces {}  records {}\n", r.model, r.config_name, r.traces, r.records);
  out += fmt::format("{} properties: {} HOLDS, {} VIOLATED, {} NOT_ACTIVATED\n\n", r.verdicts.size(),
                     r.count(Status::Holds), r.count(Status::Violated), r.count(Status::NotActivated));
  std::size_t width = 8;
  for (const auto& v : r.verdicts) width = std::max(width, v.unique_id.size());
  out += fmt::format("{:<{}}  {:<13}  {:>11}  {:>10}  {:>7}  {:>5}\n", "property", width, "status", "activations",
                     "violations", "min_gap", "slack");
  for (const auto& v : r.verdicts) {
    std::string status(status_name(v.status));
    std::string padded = fmt::format("{:<13}", status);
    if (color && v.status == Status::Violated) padded = "\x1b[31m" + padded + "\x1b[0m";
    out += fmt::format("{:<{}}  {}  {:>11}  {:>10}  {:>7}  {:>5}\n", v.unique_id, width, padded, v.activations,
                       v.violations, v.min_gap ? std::to_string(*v.min_gap) : "-",
                       v.slack ? std::to_string(*v.slack) : "-");
  }
  bool any = false;
  for (const auto& v : r.verdicts) {
    if (!v.witness) continue;
    if (!any) out += "\nfirst violations:\n";
    any = true;
    const auto& w = *v.witness;
    out += fmt::format("  {}: {}:{} cycle {} {} {} (instance {}): {}\n", v.unique_id,
                       w.trace < trace_names.size() ? trace_names[w.trace] : std::to_string(w.trace), w.line,
                       w.command.cycle, w.command.kind, coords_str(w.command.coords), coords_str(w.instance),
                       w.constraint);
  }
  return out;
}

Json coverage_json(const VerdictReport& r, const FeatureCoverageSummary& c) {
  Json j = header("coverage");
  j["model"] = r.model;
  j["config"] = r.config_name;
  Json kinds = Json::array();
  for (const auto& k : r.command_kinds) {
    kinds.push_back({{"command", k},
                     {"activations", c.activations.at(k)},
                     {"not_activated", c.not_activated.at(k)}});
  }
  j["commands"] = std::move(kinds);
  j["unexercised"] = c.unexercised;
  return j;
}

std::string coverage_text(const VerdictReport& r, const FeatureCoverageSummary& c) {
  std::string out = fmt::format("model {}  config {}  traces {}  records {}\n\n", r.model, r.config_name, r.traces,
                                r.records);
  out += fmt::format("{:<10}  {:>11}  {}\n", "command", "activations", "not activated properties");
  for (const auto& k : r.command_kinds) {
    const auto& na = c.not_activated.at(k);
    out += fmt::format("{:<10}  {:>11}  {}\n", k, c.activations.at(k), na.size());
  }
  out += fmt::format("\nunexercised commands ({}): {}\n", c.unexercised.size(),
                     c.unexercised.empty() ? "none" : fmt::format("{}", fmt::join(c.unexercised, " ")));
  out += "coverage is relative to the checked traces only.\n";
  return out;
}

Json sweep_json(const SlackSweepResult& s) {
  Json j = header("sweep");
  j["k_max"] = s.k_max;
  j["not_activated"] = s.not_activated;
  j["survivors"] = s.survivors;
  j["all_violated_at"] = s.all_violated_at ? Json(*s.all_violated_at) : Json(nullptr);
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    entries.push_back({{"id", e.unique_id},
                       {"timing_param", e.timing_param ? Json(*e.timing_param) : Json(nullptr)},
                       {"timing_value", e.timing_value},
                       {"min_gap", e.min_gap},
                       {"k", e.k},
                       {"candidate", e.candidate},
                       {"utilization", e.utilization}});
  }
  j["properties"] = std::move(entries);
  return j;
}

std::string sweep_text(const SlackSweepResult& s) {
  std::string out = fmt::format("{} activated timing properties, {} not activated, k_max {}\n\n", s.entries.size(),
                                s.not_activated, s.k_max);
  std::size_t width = 8;
  for (const auto& e : s.entries) width = std::max(width, e.unique_id.size());
  out += fmt::format("{:<{}}  {:>6}  {:>7}  {:>3}  {}\n", "property", width, "t", "min_gap", "k", "utilization");
  for (const auto& e : s.entries) {
    out += fmt::format("{:<{}}  {:>6}  {:>7}  {:>3}  {}/{} ({:.0f}% of the observed gap){}\n", e.unique_id, width,
                       e.timing_value, e.min_gap, e.k, e.timing_value, e.min_gap, 100.0 * e.utilization,
                       e.candidate ? "  candidate" : "");
  }
  out += "\nincrement  survivors\n";
  for (std::size_t i = 0; i < s.survivors.size(); ++i) out += fmt::format("{:>9}  {:>9}\n", i, s.survivors[i]);
  if (s.all_violated_at) {
    out += fmt::format("\nall violated at +{}\n", *s.all_violated_at);
  } else if (!s.entries.empty()) {
    out += fmt::format("\n{} properties still hold at +{}; raise --k-max\n", s.survivors.back(), s.k_max + 1);
  }
  out += "slack values are observed lower bounds for the checked traces only.\n";
  return out;
}

Json diff_json(const UpgradeDiff& d, const std::string& base, const std::string& target) {
  Json j = header("diff");
  j["base"] = base;
  j["target"] = target;
  auto list = [](const std::vector<DiffEntry>& entries) {
    Json a = Json::array();
    for (const auto& e : entries) {
      a.push_back({{"key", e.key},
                   {"base_id", e.old_id.empty() ? Json(nullptr) : Json(e.old_id)},
                   {"target_id", e.new_id.empty() ? Json(nullptr) : Json(e.new_id)},
                   {"commands", e.commands},
                   {"base_param", e.old_param ? Json(*e.old_param) : Json(nullptr)},
                   {"target_param", e.new_param ? Json(*e.new_param) : Json(nullptr)},
                   {"base_value", e.old_value ? Json(*e.old_value) : Json(nullptr)},
                   {"target_value", e.new_value ? Json(*e.new_value) : Json(nullptr)}});
    }
    return a;
  };
  j["unchanged"] = list(d.unchanged);
  j["timing_changed"] = list(d.timing_changed);
  j["added"] = list(d.added);
  j["removed"] = list(d.removed);
  j["discarded"] = list(d.discarded);
  return j;
}

Json explore_json(const ReachabilitySummary& s) {
  Json j = header("explore");
  j["horizon"] = s.horizon;
  j["states_explored"] = s.states_explored;
  j["complete"] = s.complete;
  Json t = Json::array();
  for (const auto& [name, ok] : s.reachable) {
    auto first = s.first_reached.find(name);
    t.push_back({{"transition", name},
                 {"reachable", ok},
                 {"first_cycle", first == s.first_reached.end() ? Json(nullptr) : Json(first->second)}});
  }
  j["transitions"] = std::move(t);
  return j;
}

std::string explore_text(const ReachabilitySummary& s) {
  std::string out = fmt::format("horizon {} cycles, {} states explored{}\n\n", s.horizon, s.states_explored,
                                s.complete ? "" : " (state bound hit, result incomplete)");
  for (const auto& [name, ok] : s.reachable) {
    auto first = s.first_reached.find(name);
    out += fmt::format("{:<10}  {}\n", name,
                       ok ? fmt::format("reachable, first at cycle {}", first->second) : std::string("not reached"));
  }
  return out;
}

}  // namespace dramv::report
