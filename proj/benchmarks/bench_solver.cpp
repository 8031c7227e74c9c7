#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "rscale/bvp.hpp"

namespace {

void BM_Solve(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  rscale::CylinderGeometry geom(33);
  const rscale::BvpSpec spec = rscale::BvpSpec::dirichlet(1);
  rscale::CylinderElement u = rscale::sample_cylinder(K, geom, [](double theta, double t) {
    return std::exp(std::complex<double>(0, theta)) * std::sin(M_PI * t);
  });
  const rscale::DataTuple data = rscale::apply_operator(spec, u, geom);
  for (auto _ : state) benchmark::DoNotOptimize(rscale::solve(spec, data, geom));
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Arg(64);

void BM_IsomorphismRatio(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  rscale::CylinderGeometry geom(33);
  const rscale::BvpSpec spec = rscale::BvpSpec::dirichlet(1);
  const rscale::FunctionParameter phi = rscale::parse_param("log");
  for (auto _ : state)
    benchmark::DoNotOptimize(rscale::isomorphism_ratio(spec, 2.0, phi, K, 8, 42, geom));
}
BENCHMARK(BM_IsomorphismRatio)->Arg(16)->Arg(32);

}  // namespace
