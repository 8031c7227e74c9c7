#include <benchmark/benchmark.h>

#include <random>

#include "rscale/bvp.hpp"
#include "rscale/cylinder.hpp"
#include "rscale/lattice.hpp"

namespace {

void BM_NormLattice(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  rscale::FrequencyLattice lattice(2, K);
  rscale::SpectralElement u(lattice);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < lattice.size(); ++i)
    u.coefficients()[i] = {gauss(rng), gauss(rng)};
  const rscale::SpaceIndex idx{1.5, rscale::parse_param("log"), rscale::Domain::Lattice, 0};
  for (auto _ : state) benchmark::DoNotOptimize(rscale::norm_lattice(u, idx));
  state.SetItemsProcessed(state.iterations() * lattice.size());
}
BENCHMARK(BM_NormLattice)->Arg(16)->Arg(64)->Arg(128);

void BM_OmegaGramAssembly(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const rscale::FunctionParameter phi = rscale::parse_param("log");
  int round = 0;
  for (auto _ : state) {
    rscale::CylinderGeometry geom(M);
    benchmark::DoNotOptimize(geom.omega_gram(round++ % 8, 1.5, phi));
  }
}
BENCHMARK(BM_OmegaGramAssembly)->Arg(17)->Arg(33);

void BM_ModifiedNorm(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  rscale::CylinderGeometry geom(33);
  std::mt19937_64 rng(11);
  const rscale::CylinderElement u = rscale::random_element(K, geom, rng, 2.0);
  const rscale::SpaceIndex idx{2.0, rscale::parse_param("log"), rscale::Domain::Omega, 2};
  rscale::norm_modified(u, idx, geom);  // warm the Gram cache
  for (auto _ : state) benchmark::DoNotOptimize(rscale::norm_modified(u, idx, geom));
}
BENCHMARK(BM_ModifiedNorm)->Arg(16)->Arg(64);

}  // namespace
