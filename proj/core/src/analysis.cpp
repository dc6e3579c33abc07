#include "dramv/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <unordered_map>

namespace dramv {

namespace {

void set_all_violated(SlackSweepResult& r) {
  r.all_violated_at.reset();
  if (r.entries.empty() || r.survivors.back() > 0) return;
  std::uint32_t max_k = 0;
  for (const auto& e : r.entries) max_k = std::max(max_k, e.k);
  r.all_violated_at = max_k + 1;
}

}  // namespace

SlackSweepResult slack_sweep(const VerdictReport& report, std::uint32_t k_max) {
  SlackSweepResult r;
  r.k_max = k_max;
  for (const auto& v : report.verdicts) {
    if (v.kind != PropertyKind::Timing) continue;
    if (!v.min_gap) {
      ++r.not_activated;
      continue;
    }
    SlackEntry e;
    e.unique_id = v.unique_id;
    e.timing_param = v.timing_param;
    e.timing_value = v.timing_value;
    e.min_gap = *v.min_gap;
    std::int64_t slack = static_cast<std::int64_t>(e.min_gap) - e.timing_value;
    e.k = static_cast<std::uint32_t>(std::clamp<std::int64_t>(slack, 0, k_max));
    e.candidate = e.k >= 1;
    e.utilization = static_cast<double>(e.timing_value) / static_cast<double>(e.min_gap);
    r.entries.push_back(std::move(e));
  }
  // Survivors use the unclamped slack so the last point counts properties
  // that outlast the whole sweep.
  r.survivors.assign(k_max + 2, 0);
  for (const auto& e : r.entries) {
    std::int64_t slack = static_cast<std::int64_t>(e.min_gap) - e.timing_value;
    for (std::int64_t i = 0; i <= std::min<std::int64_t>(slack, k_max + 1); ++i) ++r.survivors[i];
  }
  set_all_violated(r);
  return r;
}

SlackSweepResult slack_sweep_rerun(const PropertySet& props, std::span<const CommandTrace> corpus,
                                   std::uint32_t k_max, unsigned workers) {
  VerdictReport base = check(props, corpus, workers);
  SlackSweepResult r = slack_sweep(base, k_max);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    index[r.entries[i].unique_id] = i;
    r.entries[i].k = 0;
  }
  r.survivors.assign(k_max + 2, 0);
  for (std::uint32_t inc = 0; inc <= k_max + 1; ++inc) {
    VerdictReport rep = inc == 0 ? base : check(with_timing_increment(props, inc), corpus, workers);
    for (const auto& v : rep.verdicts) {
      auto it = index.find(v.unique_id);
      if (it == index.end() || v.status != Status::Holds) continue;
      ++r.survivors[inc];
      if (inc <= k_max) r.entries[it->second].k = inc;
    }
  }
  for (auto& e : r.entries) e.candidate = e.k >= 1;
  set_all_violated(r);
  return r;
}

std::string RenameTable::canonical(const std::string& name) const {
  auto it = commands.find(name);
  return it == commands.end() ? name : it->second;
}

std::string property_key(const Property& p, const RenameTable& renames) {
  switch (p.kind) {
    case PropertyKind::Arc:
      return fmt::format("ARC {} -> {}", p.place, renames.canonical(p.trigger.command));
    case PropertyKind::Inhibitor:
      return fmt::format("INHIBITOR {} -o {}", p.place, renames.canonical(p.trigger.command));
    case PropertyKind::Timing:
      return fmt::format("TIMING {} -<> {}{}", renames.canonical(p.trigger.command), renames.canonical(p.target.command),
                         p.scope_qualifier.is_default() ? "" : " " + scope_suffix(p.scope_qualifier));
    case PropertyKind::Window: {
      std::vector<std::string> feeders;
      for (const auto& f : p.feeders) feeders.push_back(renames.canonical(f.command));
      std::sort(feeders.begin(), feeders.end());
      return fmt::format("WINDOW {} <- {}", p.place, fmt::join(feeders, ","));
    }
  }
  return {};
}

namespace {

struct Keyed {
  std::string key;
  const Property* prop;
};

/// Keys with an occurrence suffix so repeated keys pair up in order.
std::vector<Keyed> keyed(const PropertySet& set, const RenameTable& renames) {
  std::vector<Keyed> out;
  std::map<std::string, int> seen;
  for (const auto& p : set.properties) {
    std::string k = property_key(p, renames);
    int n = ++seen[k];
    if (n > 1) k += fmt::format(" #{}", n);
    out.push_back({std::move(k), &p});
  }
  std::sort(out.begin(), out.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  return out;
}

bool touches(const Property& p, const RenameTable& renames, const std::set<std::string>& unsupported) {
  for (const auto& c : p.commands()) {
    if (unsupported.contains(renames.canonical(c))) return true;
  }
  return false;
}

std::optional<std::uint32_t> value_of(const Property& p) {
  if (p.kind == PropertyKind::Timing) return p.timing_value;
  if (p.kind == PropertyKind::Window) return p.window_cycles;
  return std::nullopt;
}

}  // namespace

UpgradeDiff upgrade_diff(const PropertySet& older, const PropertySet& newer, const RenameTable& renames,
                         const std::set<std::string>& unsupported) {
  UpgradeDiff d;
  std::map<std::string, DiffEntry> entries;
  std::set<std::string> discarded;
  auto side = [&](const PropertySet& set, bool is_old) {
    for (const auto& [key, p] : keyed(set, renames)) {
      auto& e = entries[key];
      e.key = key;
      (is_old ? e.old_id : e.new_id) = p->unique_id;
      (is_old ? e.old_param : e.new_param) = p->timing_param;
      (is_old ? e.old_value : e.new_value) = value_of(*p);
      for (const auto& c : p->commands()) e.commands.insert(renames.canonical(c));
      if (touches(*p, renames, unsupported)) discarded.insert(key);
    }
  };
  side(older, true);
  side(newer, false);
  for (auto& [key, e] : entries) {
    if (discarded.contains(key)) {
      d.discarded.push_back(std::move(e));
    } else if (e.old_id.empty()) {
      d.added.push_back(std::move(e));
    } else if (e.new_id.empty()) {
      d.removed.push_back(std::move(e));
    } else if (e.old_value != e.new_value || e.old_param != e.new_param) {
      d.timing_changed.push_back(std::move(e));
    } else {
      d.unchanged.push_back(std::move(e));
    }
  }
  return d;
}

std::string render_diff_table(const UpgradeDiff& diff) {
  std::string out;
  auto value = [](const std::optional<std::string>& param, const std::optional<std::uint32_t>& v) {
    if (!v) return std::string("-");
    return param ? fmt::format("{}={}", *param, *v) : fmt::format("{}", *v);
  };
  auto section = [&](std::string_view title, const std::vector<DiffEntry>& list, bool values) {
    out += fmt::format("{} ({})\n", title, list.size());
    for (const auto& e : list) {
      out += fmt::format("  {}", e.key);
      if (values) out += fmt::format("  {} -> {}", value(e.old_param, e.old_value), value(e.new_param, e.new_value));
      out += '\n';
    }
  };
  section("timing changed", diff.timing_changed, true);
  section("added", diff.added, false);
  section("removed", diff.removed, false);
  section("discarded", diff.discarded, false);
  out += fmt::format("unchanged ({})\n", diff.unchanged.size());
  return out;
}

}  // namespace dramv
