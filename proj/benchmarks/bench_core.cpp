#include <benchmark/benchmark.h>

#include "mmpe/bounds.hpp"
#include "mmpe/engine.hpp"
#include "mmpe/infometrics.hpp"
#include "mmpe/specfun.hpp"

namespace {

using namespace mmpe;

void BM_GeneralizedQ(benchmark::State& st) {
  const double x = static_cast<double>(st.range(0)) / 2.0;
  for (auto _ : st) benchmark::DoNotOptimize(generalized_q(x, 1.5 * x));
}
BENCHMARK(BM_GeneralizedQ)->Arg(1)->Arg(64)->Arg(4096);

void BM_MmpeScalarBpsk(benchmark::State& st) {
  const auto d = make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5});
  const double p = static_cast<double>(st.range(0)) / 2.0;
  for (auto _ : st) benchmark::DoNotOptimize(mmpe_scalar(d, 1.0, p).value);
}
BENCHMARK(BM_MmpeScalarBpsk)->Arg(3)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MmpeScalarPam4(benchmark::State& st) {
  const auto d = make_uniform_pam(4);
  for (auto _ : st) benchmark::DoNotOptimize(mmpe_scalar(d, 1.0, 3.0).value);
}
BENCHMARK(BM_MmpeScalarPam4)->Unit(benchmark::kMillisecond);

void BM_VectorMonteCarlo(benchmark::State& st) {
  const auto d = make_pm_one_vector(static_cast<int>(st.range(0)));
  McSettings mc;
  mc.samples = 20'000;
  for (auto _ : st) benchmark::DoNotOptimize(mmpe_vector_mc(d, 1.0, 2.0, mc).value);
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(mc.samples));
}
BENCHMARK(BM_VectorMonteCarlo)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MutualInformationBpsk(benchmark::State& st) {
  const auto d = make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5});
  for (auto _ : st) benchmark::DoNotOptimize(mutual_information_scalar(d, 1.0));
}
BENCHMARK(BM_MutualInformationBpsk)->Unit(benchmark::kMicrosecond);

void BM_Thm3Bound(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mn_bound_thm3(0.05, 4.0, 5.0, 40).bound);
}
BENCHMARK(BM_Thm3Bound);

}  // namespace

BENCHMARK_MAIN();
