#include <benchmark/benchmark.h>

#include <random>

#include "rscale/hilbert_pair.hpp"

namespace {

rscale::HilbertPair make_pair(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  Eigen::MatrixXd g0 = a.transpose() * a + Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd g1 = g0 + 0.5 * Eigen::MatrixXd::Identity(n, n);
  return rscale::HilbertPair(std::move(g0), std::move(g1));
}

void BM_GeneratingOperator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const rscale::HilbertPair pair = make_pair(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rscale::generating_operator(pair));
}
BENCHMARK(BM_GeneratingOperator)->Arg(8)->Arg(32)->Arg(128);

void BM_InterpForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const rscale::HilbertPair pair = make_pair(n, 5);
  const rscale::FunctionParameter psi = rscale::make_theta_psi(rscale::parse_param("log"), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rscale::interp_form(pair, psi));
}
BENCHMARK(BM_InterpForm)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
