#include <benchmark/benchmark.h>

#include <random>

#include "dramv/models.hpp"
#include "dramv/trace.hpp"
#include "scheduler.hpp"

using namespace dramv;

namespace {

struct Ddr4 {
  NetSpec spec;
  ElaboratedNet net;
  PropertySet props;
};

const Ddr4& ddr4() {
  static const Ddr4 d = [] {
    const ModelBundle* m = find_bundled_model("ddr4");
    NetSpec spec = parse(m->source);
    ElaboratedNet net = elaborate(spec, load_config(spec, m->configs.at("16bank")));
    PropertySet props = derive(net);
    return Ddr4{std::move(spec), std::move(net), std::move(props)};
  }();
  return d;
}

std::vector<Command> legal_trace(Cycle cycles) {
  std::mt19937_64 rng(17);
  return testing::random_trace(ddr4().net, rng, cycles, 0.0);
}

void BM_Parse(benchmark::State& state) {
  const std::string& src = find_bundled_model("ddr4")->source;
  for (auto _ : state) benchmark::DoNotOptimize(parse(src));
}
BENCHMARK(BM_Parse);

void BM_EmitSva(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(emit_sva(ddr4().props));
}
BENCHMARK(BM_EmitSva);

void BM_Check(benchmark::State& state) {
  auto cmds = legal_trace(static_cast<Cycle>(state.range(0)));
  CommandTrace t;
  for (const auto& c : cmds) t.records.push_back({c, 0});
  for (auto _ : state) benchmark::DoNotOptimize(check(ddr4().props, t));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cmds.size()));
}
BENCHMARK(BM_Check)->Arg(10000)->Arg(100000);

void BM_Run(benchmark::State& state) {
  auto cmds = legal_trace(static_cast<Cycle>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(ddr4().net, cmds));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cmds.size()));
}
BENCHMARK(BM_Run)->Arg(10000)->Arg(100000);

void BM_Explore(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(explore(ddr4().net, 10000, 2000000));
}
BENCHMARK(BM_Explore);

}  // namespace

BENCHMARK_MAIN();
