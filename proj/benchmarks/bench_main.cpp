#include <benchmark/benchmark.h>

#include "etalerep/koopman.hpp"
#include "etalerep/norms.hpp"
#include "etalerep/regular.hpp"

using namespace etalerep;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

DirectedGraph o_n(int n) {
  std::vector<Triple> edges;
  for (int i = 1; i <= n; ++i) edges.emplace_back("e" + std::to_string(i), "v", "v");
  return DirectedGraph({"v"}, edges);
}

DirectedGraph ladder(int n) {
  // n vertices on a cycle, two loops each; condition (K) holds
  std::vector<std::string> vertices;
  for (int v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<Triple> edges;
  for (int v = 0; v < n; ++v) {
    edges.emplace_back("a" + std::to_string(v), vertices[v], vertices[v]);
    edges.emplace_back("b" + std::to_string(v), vertices[v], vertices[v]);
    edges.emplace_back("c" + std::to_string(v), vertices[v], vertices[(v + 1) % n]);
  }
  return DirectedGraph(vertices, edges);
}

void BM_PathEnumeration(benchmark::State& state) {
  DirectedGraph g = o_n(2);
  for (auto _ : state) benchmark::DoNotOptimize(paths_of_length(g, state.range(0)));
}
BENCHMARK(BM_PathEnumeration)->Arg(8)->Arg(10)->Arg(12);

void BM_KoopmanAssembly(benchmark::State& state) {
  DirectedGraph g = o_n(2);
  MarkovWeights w = MarkovWeights::uniform(g);
  AlgebraElement f;
  f.add(edge_symbol(g, 0), 1);
  f.add(adjoint(edge_symbol(g, 1)), make_rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(koopman_matrix(g, w, f, state.range(0)));
}
BENCHMARK(BM_KoopmanAssembly)->Arg(6)->Arg(8)->Arg(10);

void BM_VerifyCuntzKrieger(benchmark::State& state) {
  DirectedGraph g = o_n(3);
  MarkovWeights w = MarkovWeights::uniform(g);
  for (auto _ : state) benchmark::DoNotOptimize(verify_cuntz_krieger(g, w, state.range(0)));
}
BENCHMARK(BM_VerifyCuntzKrieger)->Arg(3)->Arg(4);

void BM_RegularFiberNorm(benchmark::State& state) {
  DirectedGraph g = o_n(2);
  AlgebraElement f;
  f.add(edge_symbol(g, 0), 1);
  f.add(adjoint(edge_symbol(g, 0)), 1);
  f.add(edge_symbol(g, 1), 1);
  f.add(adjoint(edge_symbol(g, 1)), 1);
  Path base = paths_of_length(g, state.range(0) + 2).front();
  for (auto _ : state)
    benchmark::DoNotOptimize(operator_norm(regular_matrix(g, f, base, state.range(0)).mat));
}
BENCHMARK(BM_RegularFiberNorm)->Arg(4)->Arg(6);

void BM_LatticeEnumeration(benchmark::State& state) {
  DirectedGraph g = ladder(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(saturated_hereditary_lattice(g));
}
BENCHMARK(BM_LatticeEnumeration)->Arg(8)->Arg(12);

void BM_KernelIdeal(benchmark::State& state) {
  DirectedGraph g({"v", "w"}, {{"lv1", "v", "v"},
                               {"lv2", "v", "v"},
                               {"lw1", "w", "w"},
                               {"lw2", "w", "w"},
                               {"wv", "w", "v"}});
  VertexSet H = {g.vertex_index("w")};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_ideal(g, H, state.range(0)));
}
BENCHMARK(BM_KernelIdeal)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
