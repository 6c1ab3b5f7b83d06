// Serial reference kernels against the OpenMP ones. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "govpav/greedy.hpp"
#include "govpav/oracle.hpp"
#include "govpav/reference.hpp"
#include "test_support.hpp"

using namespace govpav;

namespace {

// offices x candidates, voters approving one or two candidates per office
testing::Instance survey_like(int offices, int candidates, int voters, std::uint64_t seed) {
  std::vector<testing::OfficeSpec> specs;
  for (int o = 0; o < offices; ++o) {
    testing::OfficeSpec spec{"o" + std::to_string(o), {}};
    for (int c = 0; c < candidates; ++c) spec.second.push_back("o" + std::to_string(o) + "c" + std::to_string(c));
    specs.push_back(std::move(spec));
  }
  Election e = testing::make_election(specs);
  std::mt19937_64 rng(seed);
  std::vector<Voter> vs;
  for (int v = 0; v < voters; ++v) {
    Voter voter{"v" + std::to_string(v), {}};
    for (const Office& off : e.offices()) {
      voter.approvals.push_back(off.first + rng() % off.size());
      if (rng() % 3 == 0) voter.approvals.push_back(off.first + rng() % off.size());
    }
    vs.push_back(std::move(voter));
  }
  ApprovalProfile p = make_profile(e, std::move(vs));
  return testing::Instance{std::move(e), std::move(p)};
}

const testing::Instance& instance(int which) {
  static const testing::Instance survey = survey_like(12, 4, 500, 1);
  static const testing::Instance large = survey_like(40, 10, 20000, 2);
  static const testing::Instance search = survey_like(8, 4, 200, 3);
  return which == 0 ? survey : which == 1 ? large : search;
}

void BM_greedy_parallel(benchmark::State& state) {
  const auto& inst = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(greedy_pav(inst.election, inst.profile));
}

void BM_greedy_reference(benchmark::State& state) {
  const auto& inst = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::greedy_pav(inst.election, inst.profile));
}

void BM_exact_parallel(benchmark::State& state) {
  const auto& inst = instance(2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_pav(inst.election, inst.profile));
}

void BM_exact_reference(benchmark::State& state) {
  const auto& inst = instance(2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::exact_pav(inst.election, inst.profile));
}

}  // namespace

// 0 = 12x4x500, 1 = 40x10x20000
BENCHMARK(BM_greedy_parallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_greedy_reference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
// 8 offices x 4 candidates = 65536 committees
BENCHMARK(BM_exact_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_reference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
