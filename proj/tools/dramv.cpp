// dramv: DRAMml models to SystemVerilog assertions and trace checks.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dramv/analysis.hpp"
#include "dramv/models.hpp"
#include "dramv/properties.hpp"
#include "dramv/trace.hpp"
#include "report.hpp"

namespace {

using namespace dramv;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path));
  out << text;
}

struct Loaded {
  std::string model_name;
  NetSpec spec;
  const ModelBundle* bundle = nullptr;
};

Loaded load_model(const std::string& name) {
  Loaded m;
  m.model_name = name;
  if ((m.bundle = find_bundled_model(name))) {
    m.spec = parse(m.bundle->source, ParseMode::Strict, m.bundle->file);
  } else {
    m.spec = parse(read_file(name), ParseMode::Strict, name);
  }
  return m;
}

Config resolve_config(const Loaded& m, const std::string& name) {
  if (m.bundle) {
    std::string key = name.empty() ? "16bank" : name;
    auto it = m.bundle->configs.find(key);
    if (it != m.bundle->configs.end()) return load_config(m.spec, it->second, m.bundle->name + "-" + key + ".cfg");
  }
  if (name.empty()) throw UsageError("--config is required for a model file");
  return load_config(m.spec, read_file(name), name);
}

struct Output {
  std::string prefix;
  bool json = false;

  void emit(const std::string& text, const report::Json& j) const {
    std::string json_text = j.dump(2) + "\n";
    if (!prefix.empty()) {
      write_file(prefix + ".txt", text);
      write_file(prefix + ".json", json_text);
    }
    std::cout << (json ? json_text : text);
  }
};

void add_output(CLI::App* sub, Output& out) {
  sub->add_option("--out", out.prefix, "Write <prefix>.txt and <prefix>.json");
  sub->add_flag("--json", out.json, "Print the JSON report instead of text");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DRAMml protocol models: SVA generation and trace checking"};
  app.require_subcommand(1);

  std::string model = "ddr4", config, signals, sv_out, base = "ddr4", target = "ddr5-delta", drop;
  std::vector<std::string> traces;
  unsigned workers = 1;
  std::uint32_t k_max = 64;
  bool rerun = false, render_flag = false;
  std::uint64_t horizon = 10000;
  std::size_t state_bound = 2000000;
  Output out;

  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--model", model, "ddr4, ddr5-delta or a .dramml file")->capture_default_str();
    sub->add_option("--config", config, "16bank, 8bank or a .cfg file (default 16bank for bundled models)");
  };
  auto trace_opts = [&](CLI::App* sub) {
    sub->add_option("--trace", traces, "Command trace file (repeatable)")->required();
    sub->add_option("--workers", workers, "Traces checked concurrently")->capture_default_str();
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and validate a model");
  model_opts(parse_cmd);
  parse_cmd->add_flag("--render", render_flag, "Print the canonical form of the model");
  add_output(parse_cmd, out);

  auto* sva_cmd = app.add_subcommand("gen-sva", "Generate SystemVerilog assertions");
  model_opts(sva_cmd);
  sva_cmd->add_option("--signals", signals, "Signal-name mapping file");
  sva_cmd->add_option("-o,--output", sv_out, "Output .sv file (default stdout)");

  auto* check_cmd = app.add_subcommand("check", "Check command traces against the properties");
  model_opts(check_cmd);
  trace_opts(check_cmd);
  add_output(check_cmd, out);

  auto* cov_cmd = app.add_subcommand("coverage", "Report command kinds the traces never exercise");
  model_opts(cov_cmd);
  trace_opts(cov_cmd);
  add_output(cov_cmd, out);

  auto* sweep_cmd = app.add_subcommand("sweep", "Timing slack sweep over the traces");
  model_opts(sweep_cmd);
  trace_opts(sweep_cmd);
  sweep_cmd->add_option("--k-max", k_max, "Largest timing increment")->capture_default_str();
  sweep_cmd->add_flag("--rerun", rerun, "Re-check the traces at every increment");
  add_output(sweep_cmd, out);

  auto* diff_cmd = app.add_subcommand("diff", "Compare the properties of two models");
  diff_cmd->add_option("--base", base, "Older model")->capture_default_str();
  diff_cmd->add_option("--target", target, "Newer model")->capture_default_str();
  diff_cmd->add_option("--config", config, "Config applied to both (bundled name)");
  diff_cmd->add_option("--drop", drop, "Comma-separated unsupported command kinds");
  add_output(diff_cmd, out);

  auto* explore_cmd = app.add_subcommand("explore", "Bounded reachability of every transition");
  model_opts(explore_cmd);
  explore_cmd->add_option("--horizon", horizon, "Cycle horizon")->capture_default_str();
  explore_cmd->add_option("--state-bound", state_bound, "Maximum abstract states")->capture_default_str();
  add_output(explore_cmd, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse_cmd) {
      Loaded m = load_model(model);
      std::string text = fmt::format("{}: {} hierarchies, {} places, {} transitions, {} arcs, {} timing parameters\n",
                                     m.spec.standard_name.empty() ? model : m.spec.standard_name,
                                     m.spec.hierarchies.size(), m.spec.places.size(), m.spec.transitions.size(),
                                     m.spec.arcs.size(), m.spec.timing_params.size());
      report::Json j;
      j["format"] = 1;
      j["command"] = "parse";
      j["standard"] = m.spec.standard_name;
      j["hierarchies"] = m.spec.hierarchies.size();
      j["places"] = m.spec.places.size();
      j["transitions"] = m.spec.transitions.size();
      j["arcs"] = m.spec.arcs.size();
      if (m.bundle || !config.empty()) {
        Config cfg = resolve_config(m, config);
        auto counts = count_summary(derive(elaborate(m.spec, cfg)));
        text += fmt::format("config {}: {} unique properties, {} generated\n", cfg.name, counts.unique, counts.generated);
        j["config"] = cfg.name;
        j["unique"] = counts.unique;
        j["generated"] = counts.generated;
      }
      if (render_flag) text += "\n" + render(m.spec);
      out.emit(text, j);
      return 0;
    }
    if (*sva_cmd) {
      Loaded m = load_model(model);
      PropertySet props = derive(elaborate(m.spec, resolve_config(m, config)));
      SignalMap map = signals.empty() ? SignalMap{} : parse_signal_map(read_file(signals), signals);
      std::string sv = emit_sva(props, map);
      if (sv_out.empty()) {
        std::cout << sv;
      } else {
        write_file(sv_out, sv);
      }
      auto counts = count_summary(props);
      std::cerr << fmt::format("{} unique properties, {} generated\n", counts.unique, counts.generated);
      return 0;
    }
    if (*check_cmd || *cov_cmd || *sweep_cmd) {
      Loaded m = load_model(model);
      PropertySet props = derive(elaborate(m.spec, resolve_config(m, config)));
      std::vector<CommandTrace> corpus;
      for (const auto& t : traces) corpus.push_back(load_trace(read_file(t), props, t));
      if (*sweep_cmd) {
        SlackSweepResult s = rerun ? slack_sweep_rerun(props, corpus, k_max, workers)
                                   : slack_sweep(check(props, corpus, workers), k_max);
        out.emit(report::sweep_text(s), report::sweep_json(s));
        return 0;
      }
      VerdictReport r = check(props, corpus, workers);
      if (*cov_cmd) {
        auto c = coverage(r);
        out.emit(report::coverage_text(r, c), report::coverage_json(r, c));
        return 0;
      }
      out.emit(report::check_text(r, traces, out.prefix.empty() && !out.json && report::use_color()),
               report::check_json(r, traces));
      return r.count(Status::Violated) > 0 ? 1 : 0;
    }
    if (*diff_cmd) {
      Loaded a = load_model(base);
      Loaded b = load_model(target);
      PropertySet pa = derive(elaborate(a.spec, resolve_config(a, config)));
      PropertySet pb = derive(elaborate(b.spec, resolve_config(b, config)));
      RenameTable renames = b.bundle ? b.bundle->renames : RenameTable{};
      auto dropped = split_list(drop);
      UpgradeDiff d = upgrade_diff(pa, pb, renames, {dropped.begin(), dropped.end()});
      out.emit(render_diff_table(d), report::diff_json(d, base, target));
      return 0;
    }
    if (*explore_cmd) {
      Loaded m = load_model(model);
      ElaboratedNet net = elaborate(m.spec, resolve_config(m, config));
      ReachabilitySummary s = explore(net, horizon, state_bound);
      out.emit(report::explore_text(s), report::explore_json(s));
      bool all = std::all_of(s.reachable.begin(), s.reachable.end(), [](auto& kv) { return kv.second; });
      return all ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
