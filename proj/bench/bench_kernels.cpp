// OpenMP kernels against the serial reference on the same data.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nschc/kernels.hpp"

using namespace nschc;

namespace {

struct Data {
  Grid g;
  std::vector<double> f, gx, gy, out, cx, cy;
  explicit Data(int n) : g(Grid::make(n, n, 1.0, 1.0)) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    f.resize(g.cells());
    out.resize(g.cells());
    gx.resize(g.x_faces());
    gy.resize(g.y_faces());
    cx.resize(g.x_faces());
    cy.resize(g.y_faces());
    for (auto* v : {&f, &cx, &cy})
      for (double& x : *v) x = u(rng);
  }
};

template <bool Parallel>
void BM_laplacian(benchmark::State& st) {
  Data d(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel) kernels::laplacian(d.g, d.f.data(), d.out.data());
    else kernels::serial::laplacian(d.g, d.f.data(), d.out.data());
    benchmark::DoNotOptimize(d.out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.g.cells()));
}

template <bool Parallel>
void BM_gradient(benchmark::State& st) {
  Data d(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel) kernels::gradient(d.g, d.f.data(), d.gx.data(), d.gy.data());
    else kernels::serial::gradient(d.g, d.f.data(), d.gx.data(), d.gy.data());
    benchmark::DoNotOptimize(d.gx.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.g.cells()));
}

template <bool Parallel>
void BM_flux_apply(benchmark::State& st) {
  Data d(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel) kernels::flux_apply(d.g, d.cx.data(), d.cy.data(), d.f.data(), d.out.data());
    else kernels::serial::flux_apply(d.g, d.cx.data(), d.cy.data(), d.f.data(), d.out.data());
    benchmark::DoNotOptimize(d.out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.g.cells()));
}

template <bool Parallel>
void BM_dot(benchmark::State& st) {
  Data d(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    double s = Parallel ? kernels::dot(d.f, d.cx) : kernels::serial::dot(d.f, d.cx);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.g.cells()));
}

}  // namespace

BENCHMARK(BM_laplacian<false>)->Name("laplacian/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_laplacian<true>)->Name("laplacian/openmp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_gradient<false>)->Name("gradient/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_gradient<true>)->Name("gradient/openmp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_flux_apply<false>)->Name("flux_apply/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_flux_apply<true>)->Name("flux_apply/openmp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_dot<false>)->Name("dot/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_dot<true>)->Name("dot/openmp")->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
