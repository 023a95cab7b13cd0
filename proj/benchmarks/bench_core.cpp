#include <benchmark/benchmark.h>

#include <random>

#include "s2p/dbscan.hpp"
#include "s2p/discovery.hpp"
#include "s2p/game_env.hpp"
#include "s2p/kde.hpp"
#include "s2p/planner.hpp"

namespace {

const s2p::TileMap& reference_map() {
  static const s2p::TileMap map = s2p::load_map_file(std::string(S2P_DATA_DIR) + "/reference.map");
  return map;
}

void BM_SimulatorStep(benchmark::State& state) {
  const auto& map = reference_map();
  s2p::Rng rng(1);
  s2p::WorldState s = s2p::reset(map);
  for (auto _ : state) {
    const auto avail = s2p::available_primitives(map, s);
    const auto p = s2p::kAllPrimitives[rng() % s2p::kAllPrimitives.size()];
    if (avail.contains(p)) s = s2p::step_primitive(map, s, p, rng);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SimulatorStep);

void BM_Discovery(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(s2p::discover_options(reference_map(), {}));
}
BENCHMARK(BM_Discovery)->Unit(benchmark::kMillisecond);

std::vector<s2p::Point> blobs(std::size_t n, std::size_t dims) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<s2p::Point> pts(n, s2p::Point(dims));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : pts[i]) x = 0.25 * static_cast<double>(i % 4) + noise(rng);
  }
  return pts;
}

void BM_Dbscan(benchmark::State& state) {
  const auto pts = blobs(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(s2p::dbscan(pts, 0.05, 5));
}
BENCHMARK(BM_Dbscan)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_KdeDensity(benchmark::State& state) {
  const s2p::Kde k(blobs(static_cast<std::size_t>(state.range(0)), 2), {});
  const s2p::Point x{0.3, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(k.density(x));
}
BENCHMARK(BM_KdeDensity)->Range(64, 4096);

// A chain of n propositions where each step succeeds with probability 0.8.
std::pair<s2p::ppddl::Domain, s2p::ppddl::Problem> chain_task(int n) {
  s2p::ppddl::Domain d;
  d.name = "chain";
  for (int i = 0; i <= n; ++i) d.predicates.push_back("p" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    s2p::ppddl::Action a;
    a.name = "step" + std::to_string(i);
    a.precondition = {{"p" + std::to_string(i), true, {}}};
    a.effect = {{0.8, {{"p" + std::to_string(i + 1), true, {}}, {"p" + std::to_string(i), false, {}}}, {}}, {0.2, {}, {}}};
    d.actions.push_back(a);
  }
  s2p::ppddl::Problem p;
  p.name = "chain_problem";
  p.domain = "chain";
  p.init = {"p0"};
  p.goal = {{"p" + std::to_string(n), true, {}}};
  return {d, p};
}

void BM_Planner(benchmark::State& state) {
  const auto [d, p] = chain_task(static_cast<int>(state.range(0)));
  const auto task = s2p::ground(d, p);
  s2p::PlannerParams params;
  params.algorithm = state.range(1) == 0 ? s2p::Algorithm::Lrtdp : s2p::Algorithm::ValueIteration;
  for (auto _ : state) benchmark::DoNotOptimize(s2p::solve(task, params).init_value);
}
BENCHMARK(BM_Planner)->ArgsProduct({{8, 32, 128}, {0, 1}});

}  // namespace
BENCHMARK_MAIN();
