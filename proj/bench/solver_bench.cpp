#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "acrwl/parser.hpp"
#include "acrwl/solver.hpp"

using namespace acrwl;

namespace {

const Program& program(const std::string& f) {
  static std::map<std::string, Program> cache;
  auto it = cache.find(f);
  if (it == cache.end()) it = cache.emplace(f, load_program(std::string(ACRWL_CORPUS_DIR) + "/" + f)).first;
  return it->second;
}

// range(0): worker threads (1 serial, 0 all cores).
void run(benchmark::State& state, const char* file, size_t goal, uint32_t depth, size_t max_answers) {
  const Program& p = program(file);
  SolveConfig cfg;
  cfg.max_depth = depth;
  cfg.max_answers = max_answers;
  cfg.validate = false;
  cfg.threads = static_cast<int>(state.range(0));
  size_t states = 0;
  for (auto _ : state) {
    auto r = solve(p, p.goals[goal], cfg);
    benchmark::DoNotOptimize(r.answers.data());
    states = r.states;
  }
  state.counters["states"] = static_cast<double>(states);
}

void BM_SetSelect(benchmark::State& s) { run(s, "sets.acrwl", 0, 25, SIZE_MAX); }
void BM_LazySet(benchmark::State& s) { run(s, "sets.acrwl", 1, 40, 1); }
void BM_Blocks2(benchmark::State& s) { run(s, "blocks2.acrwl", 0, 60, 1); }

}  // namespace

BENCHMARK(BM_SetSelect)->ArgName("threads")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LazySet)->ArgName("threads")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blocks2)->ArgName("threads")->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
