// Serial reference vs OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "isothermic/artifacts.hpp"
#include "isothermic/constructions.hpp"

using namespace isothermic;

namespace {

Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

Chart torus(int res) {
  Chart c = cyclide(2, 1, 1.0);
  c.box = c.box.with_resolution(res);
  return c;
}

void BM_Conformality(benchmark::State& s) {
  const Chart c = torus(33);
  CheckOptions o;
  o.exec = mode(s);
  for (auto _ : s) benchmark::DoNotOptimize(conformality_check(c, o).residual);
}

void BM_PrincipalCurvatures(benchmark::State& s) {
  const Chart c = torus(33);
  CheckOptions o;
  o.exec = mode(s);
  for (auto _ : s) benchmark::DoNotOptimize(principal_curvature_fields(c, o).size());
}

void BM_Ribaucour(benchmark::State& s) {
  const Box box = Box::uniform(Vec::Constant(1, 0.2), Vec::Constant(1, 2.8), 17);
  const Chart line = make_chart("line", isothermic::line(Vec::Zero(1), Vec::Ones(1)), box);
  const CombescureData d = darboux_sphere_factor(line, make_chart("circle", circle(1.0), box), Vec::Zero(2), 1.0);
  CheckOptions o;
  o.exec = mode(s);
  for (auto _ : s) {
    const RibaucourResult r = ribaucour_transform(d, o);
    benchmark::DoNotOptimize(verify_ribaucour_relations(d.host, r.chart, r.data, o).metric);
  }
}

void BM_ObjMesh(benchmark::State& s) {
  const Chart c = torus(129);
  for (auto _ : s) benchmark::DoNotOptimize(obj_mesh(c, mode(s)).size());
}

}  // namespace

BENCHMARK(BM_Conformality)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PrincipalCurvatures)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Ribaucour)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ObjMesh)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
