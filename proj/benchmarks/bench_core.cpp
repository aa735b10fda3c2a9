#include <benchmark/benchmark.h>

#include <flatbldg/flat.hpp>

using namespace flatbldg;

namespace {

SystemPtr fresh(const char* ty) { return build_system(ty); }

void BM_BallEnumeration(benchmark::State& state) {
  for (auto _ : state) {
    auto sys = fresh("A~2"); // fresh system: no memoized ball
    benchmark::DoNotOptimize(ball(sys, static_cast<std::size_t>(state.range(0))).size());
  }
}
BENCHMARK(BM_BallEnumeration)->Arg(4)->Arg(8)->Arg(12);

void BM_LengthDescent(benchmark::State& state) {
  auto sys = fresh("C~2");
  Elem w = Elem::identity(sys);
  for (int i = 0; i < state.range(0); ++i) w = w.mul_gen_right(i % 3 == 2 ? 2 : i % 3);
  for (auto _ : state) {
    auto fresh_sys = fresh("C~2");
    Elem copy = Elem::from_word(fresh_sys, reduced_word(w));
    benchmark::DoNotOptimize(length(copy));
  }
}
BENCHMARK(BM_LengthDescent)->Arg(8)->Arg(16)->Arg(32);

void BM_QLength(benchmark::State& state) {
  auto sys = fresh("C~2");
  Thickness q(sys, {Int(2), Int(3), Int(2)});
  SectorRef sec(make_gem(sys, 0, Elem::identity(sys)), Elem::identity(sys));
  Elem t = sector_translation(sec).elem.pow(4);
  for (auto _ : state) benchmark::DoNotOptimize(q_length(t, q));
}
BENCHMARK(BM_QLength);

void BM_FlatRootSystem(benchmark::State& state) {
  for (auto _ : state) {
    auto sys = fresh("C~2");
    Thickness q(sys, {Int(2), Int(3), Int(2)});
    SectorRef sec(make_gem(sys, 0, Elem::identity(sys)), Elem::identity(sys));
    benchmark::DoNotOptimize(flat_root_system(sec, q).size());
  }
}
BENCHMARK(BM_FlatRootSystem);

void BM_ConvexHull(benchmark::State& state) {
  auto sys = fresh("A~2");
  auto pool = ball(sys, 4);
  std::vector<Elem> X{pool[3], pool[17], pool[29], pool.back()};
  for (auto _ : state)
    benchmark::DoNotOptimize(convex_hull(X, HullMode::gallery_closure).size());
}
BENCHMARK(BM_ConvexHull);

void BM_SectorSweep(benchmark::State& state) {
  auto sys = fresh("A~2");
  SectorRef sec(make_gem(sys, 0, Elem::identity(sys)), Elem::identity(sys));
  auto B = ball(sys, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::size_t members = 0;
    for (const auto& d : B)
      if (sector_membership(sec, d, SectorMode::root_intersection)) ++members;
    benchmark::DoNotOptimize(members);
  }
}
BENCHMARK(BM_SectorSweep)->Arg(5)->Arg(8);

void BM_EigenfactorCensus(benchmark::State& state) {
  for (auto _ : state) {
    auto sys = fresh("C~2");
    SectorRef sec(make_gem(sys, 0, Elem::identity(sys)), Elem::identity(sys));
    benchmark::DoNotOptimize(eigenfactor_census(sec).distinct.size());
  }
}
BENCHMARK(BM_EigenfactorCensus);

} // namespace

BENCHMARK_MAIN();
