#include <benchmark/benchmark.h>

#include <map>

#include <honeygraph/honeygraph.hpp>

using namespace honeygraph;

namespace {

struct Setup {
  ModelConfig config;
  ModelParams params;
  std::vector<GraphTensors> tensors;

  explicit Setup(std::size_t size) {
    const Dataset d = generate_dataset(preset_spec(size, 32, 3));
    Rng rng = make_rng(4);
    params = ModelParams::initialize(config, rng);
    for (const auto& g : d.graphs) tensors.push_back(to_matrices(g, d.max_node_count()));
  }
};

const Setup& setup(std::size_t size) {
  static std::map<std::size_t, Setup> cache;
  auto it = cache.find(size);
  if (it == cache.end()) it = cache.emplace(size, Setup(size)).first;
  return it->second;
}

void BM_Encode(benchmark::State& state) {
  const Setup& s = setup(static_cast<std::size_t>(state.range(0)));
  Rng rng = make_rng(5);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode(s.tensors[k++ % s.tensors.size()], s.params, rng).z.data());
  }
}
BENCHMARK(BM_Encode)->Arg(15)->Arg(50)->Arg(150)->Unit(benchmark::kMicrosecond);

void BM_LossAndGradient(benchmark::State& state) {
  const Setup& s = setup(static_cast<std::size_t>(state.range(0)));
  Rng rng = make_rng(6);
  ModelParams grad = ModelParams::zeros(s.config);
  std::size_t k = 0;
  for (auto _ : state) {
    const GraphTensors& t = s.tensors[k++ % s.tensors.size()];
    const Eigen::MatrixXd eps =
        standard_normal(static_cast<Eigen::Index>(t.n_pad), static_cast<Eigen::Index>(s.config.latent_dim), rng);
    benchmark::DoNotOptimize(loss_and_gradient(t, s.params, s.config, eps, &grad).total);
  }
}
BENCHMARK(BM_LossAndGradient)->Arg(15)->Arg(50)->Unit(benchmark::kMillisecond);

// One Adam step over a full batch of 32 graphs.
void BM_TrainStep(benchmark::State& state) {
  const Setup& s = setup(static_cast<std::size_t>(state.range(0)));
  ModelParams params = s.params;
  AdamOptimizer adam(params, 1e-3, 0.96, 1000);
  Rng rng = make_rng(7);
  for (auto _ : state) {
    ModelParams grad = ModelParams::zeros(s.config);
    for (const auto& t : s.tensors) {
      const Eigen::MatrixXd eps =
          standard_normal(static_cast<Eigen::Index>(t.n_pad), static_cast<Eigen::Index>(s.config.latent_dim), rng);
      loss_and_gradient(t, params, s.config, eps, &grad, 1.0 / static_cast<double>(s.tensors.size()));
    }
    adam.step(params, grad);
  }
}
BENCHMARK(BM_TrainStep)->Arg(15)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Extend(benchmark::State& state) {
  const Setup& s = setup(50);
  const Dataset d = generate_dataset(preset_spec(50, 1, 9));
  Rng rng = make_rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extend_graph(s.params, s.config, d.graphs.front(), 5, rng).new_nodes.size());
  }
}
BENCHMARK(BM_Extend)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
