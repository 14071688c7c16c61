#include <doctest.h>

#include "fixtures.hpp"

using namespace honeygraph;

TEST_CASE("extension keeps User sinks with at least one incoming edge") {
  const ModelConfig c = fixtures::tiny_config(4, 3);
  const ModelParams p = fixtures::random_params(c, 3);
  const ADGraph g = fixtures::small_domain();
  Rng rng = make_rng(1);
  const ExtensionResult x = extend_graph(p, c, g, 5, rng);
  CHECK(x.new_nodes.size() + x.discarded.size() == 5);
  CHECK(x.scores.rows() == 5);
  CHECK(x.scores.cols() == static_cast<Eigen::Index>(g.node_count()));
  CHECK(x.column_order == topological_sort(g));
  CHECK((x.scores.array() > 0.0).all());
  CHECK((x.scores.array() < 1.0).all());
  for (const auto& id : x.new_nodes) {
    const auto idx = *x.graph.index_of(id);
    CHECK(x.graph.node(idx).type == NodeType::User);
    CHECK(x.graph.in_degree(idx) >= 1);
    CHECK(x.graph.out_degree(idx) == 0);
  }
  for (const Edge& e : g.edges()) CHECK(x.graph.has_edge(e.source, e.target));
}

TEST_CASE("extension is deterministic for a fixed stream") {
  const ModelConfig c = fixtures::tiny_config(4, 3);
  const ModelParams p = fixtures::random_params(c, 3);
  Rng a = make_rng(7), b = make_rng(7);
  const ExtensionResult x = extend_graph(p, c, fixtures::small_domain(), 4, a);
  const ExtensionResult y = extend_graph(p, c, fixtures::small_domain(), 4, b);
  CHECK(x.scores == y.scores);
  CHECK(to_native_json(x.graph) == to_native_json(y.graph));
}

TEST_CASE("threshold near one discards the node") {
  ModelConfig c = fixtures::tiny_config(4, 3);
  c.edge_threshold = 1.0 - 1e-12;
  const ModelParams p = fixtures::random_params(c, 3);
  Rng rng = make_rng(2);
  const ExtensionResult x = extend_graph(p, c, fixtures::small_domain(), 1, rng);
  CHECK(x.new_nodes.empty());
  CHECK(x.discarded == std::vector<std::size_t>{0});
  CHECK(x.graph.node_count() == fixtures::small_domain().node_count());
}

TEST_CASE("a saturated decoder connects everything") {
  ModelConfig c = fixtures::tiny_config(4, 3);
  ModelParams p = fixtures::random_params(c, 3);
  p.decoder.back().weight.setZero();
  p.decoder.back().bias(0) = 10.0;
  Rng rng = make_rng(2);
  const ADGraph g = fixtures::small_domain();
  const ExtensionResult x = extend_graph(p, c, g, 2, rng);
  REQUIRE(x.new_nodes.size() == 2);
  for (const auto& id : x.new_nodes) CHECK(x.graph.in_degree(*x.graph.index_of(id)) == g.node_count());
}

TEST_CASE("k must be positive") {
  const ModelConfig c = fixtures::tiny_config(4, 3);
  const ModelParams p = fixtures::random_params(c, 3);
  Rng rng = make_rng(2);
  CHECK_THROWS_AS(extend_graph(p, c, fixtures::small_domain(), 0, rng), Error);
}

TEST_CASE("aggregated posterior sampling also yields valid extensions") {
  ModelConfig c = fixtures::tiny_config(4, 3);
  c.sampling = LatentSampling::AggregatedPosterior;
  const ModelParams p = fixtures::random_params(c, 4);
  Rng rng = make_rng(3);
  const ExtensionResult x = extend_graph(p, c, fixtures::small_domain(), 5, rng);
  CHECK(x.new_nodes.size() + x.discarded.size() == 5);
}
