// Serial reference vs OpenMP kernel, side by side. On a single-core machine
// the pairs should run at about the same speed; the gap shows up with cores.
//
//   ./build/bench/bench_kernels --benchmark_filter=Forward

#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "tempograph/inference.hpp"
#include "tempograph/interval_algebra.hpp"
#include "tempograph/log.hpp"
#include "tempograph/pipeline.hpp"
#include "tempograph/relgraphconv.hpp"
#include "tempograph/synthetic.hpp"

using namespace tempograph;

namespace {

// Question time, `times` time nodes linked to it, and `events` events each
// attached to a random time node or an earlier event.
TemporalGraph big_graph(int times, int events) {
  std::mt19937_64 rng(1);
  std::vector<Node> nodes{{0, NodeKind::kQuestionTime, 0, 4, "1990", whole_year(1990)}};
  std::vector<Edge> edges;
  for (int t = 1; t <= times; ++t) {
    nodes.push_back({t, NodeKind::kDocTime, 0, 4, "t", whole_year(1900 + t % 200)});
    edges.push_back({t, 0, relate(whole_year(1900 + t % 200), whole_year(1990)), EdgeProvenance::kTimeLink});
  }
  for (int e = 0; e < events; ++e) {
    const int id = times + 1 + e;
    nodes.push_back({id, NodeKind::kDocEvent, 0, 1, "e", std::nullopt});
    const int target = e > 0 && rng() % 2 ? times + 1 + static_cast<int>(rng() % e) : 1 + static_cast<int>(rng() % times);
    edges.push_back({id, target, static_cast<TemporalRelation>(rng() % 6), EdgeProvenance::kAnnotation});
  }
  return TemporalGraph(nodes, edges);
}

struct ForwardCase {
  RelConvLayer layer;
  GnnExport graph;
  NodeStates h;
};

ForwardCase forward_case(int n, int d) {
  std::mt19937_64 rng(2);
  ForwardCase c;
  c.layer = make_layer(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (auto& w : c.layer.relation_weights) w = Eigen::MatrixXd::Random(d, d);
  c.layer.self_weight = Eigen::MatrixXd::Random(d, d);
  for (int i = 0; i < n; ++i) c.graph.nodes.push_back({i, i == 0 ? NodeKind::kQuestionTime : NodeKind::kDocTime, static_cast<std::size_t>(i)});
  for (int k = 0; k < 4 * n; ++k) {
    c.graph.edges.push_back({static_cast<NodeId>(rng() % n), static_cast<NodeId>(rng() % n), rng() % 6});
  }
  c.h = NodeStates::Random(n, d);
  return c;
}

void BM_CompositionSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_composition_outcomes_serial(static_cast<int>(state.range(0))));
}
void BM_CompositionParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_composition_outcomes(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CompositionSerial)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompositionParallel)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_InferSerial(benchmark::State& state) {
  const TemporalGraph g = big_graph(50, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(infer_all_serial(g));
}
void BM_InferParallel(benchmark::State& state) {
  const TemporalGraph g = big_graph(50, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(infer_all(g));
}
BENCHMARK(BM_InferSerial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InferParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ForwardSerial(benchmark::State& state) {
  const ForwardCase c = forward_case(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(forward_serial(c.layer, c.graph, c.h));
}
void BM_ForwardParallel(benchmark::State& state) {
  const ForwardCase c = forward_case(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(forward(c.layer, c.graph, c.h));
}
BENCHMARK(BM_ForwardSerial)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardParallel)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  set_log_level(LogLevel::kError);  // the corpus has a few malformed dates
  SyntheticOptions opts;
  opts.documents = 500;
  const auto corpus = synthetic_corpus(opts);
  RunConfig config;
  config.variant = GraphVariant::kDTE2QT;
  config.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(process_all(corpus, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
void pipeline_args(benchmark::internal::Benchmark* b) {
  b->Arg(1);
  if (omp_get_num_procs() > 1) b->Arg(omp_get_num_procs());
}
BENCHMARK(BM_Pipeline)->Apply(pipeline_args)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
