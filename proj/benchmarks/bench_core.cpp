// Microbenchmarks for the solver stages at the desk-scale simulation size
// (n = 200, d = 50). Run manually; not registered with ctest.

#include "debias/inference.hpp"
#include "debias/lasso.hpp"
#include "debias/propensity.hpp"
#include "debias/simgen.hpp"
#include "debias/tuning.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace debias;

SimDesign desk_design() {
  SimDesign design;
  design.covariance = CovarianceKind::CirculantSymmetric;
  design.beta_design = BetaKind::Sparse;
  design.query_design = QueryKind::X1;
  design.missingness = MissingKind::Mcar;
  design.mcar_p = 0.7;
  design.seed = 17;
  return design;
}

void BM_ScaledLassoPilot(benchmark::State& state) {
  const Replication rep = gen_replication(desk_design(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(pilot_fit(rep.data));
}
BENCHMARK(BM_ScaledLassoPilot)->Unit(benchmark::kMillisecond);

void BM_LogisticLassoCv(benchmark::State& state) {
  const Replication rep = gen_replication(desk_design(), 0);
  const LogisticLassoCv estimator(5, 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimator.fit(rep.data.covariates(), rep.data.mask()));
}
BENCHMARK(BM_LogisticLassoCv)->Unit(benchmark::kMillisecond);

void BM_DualSolve(benchmark::State& state) {
  const Replication rep = gen_replication(desk_design(), 0);
  const QueryPoint x = query_design(QueryKind::X1, 50, CovarianceKind::CirculantSymmetric);
  const double gamma = 0.2 * static_cast<double>(rep.data.n());
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_dual_cd(rep.data.covariates(), rep.true_pi, x, gamma));
}
BENCHMARK(BM_DualSolve)->Unit(benchmark::kMillisecond);

void BM_GammaCrossValidation(benchmark::State& state) {
  const Replication rep = gen_replication(desk_design(), 0);
  const QueryPoint x = query_design(QueryKind::X1, 50, CovarianceKind::CirculantSymmetric);
  TuningConfig cfg;
  cfg.seed = 17;
  for (auto _ : state)
    benchmark::DoNotOptimize(cv_gamma(rep.data.covariates(), rep.true_pi, x, cfg));
}
BENCHMARK(BM_GammaCrossValidation)->Unit(benchmark::kMillisecond);

void BM_FullPipelineReplication(benchmark::State& state) {
  const Replication rep = gen_replication(desk_design(), 0);
  const QueryPoint x = query_design(QueryKind::X1, 50, CovarianceKind::CirculantSymmetric);
  PipelineConfig cfg;
  cfg.seed = 17;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(rep.data, x, cfg));
}
BENCHMARK(BM_FullPipelineReplication)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
