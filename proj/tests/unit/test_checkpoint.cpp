#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"

using namespace honeygraph;

TEST_CASE("checkpoint round trip is exact") {
  ModelConfig c = fixtures::tiny_config(3, 2);
  c.kl_weight = 0.03;
  c.sampling = LatentSampling::AggregatedPosterior;
  c.epochs = 17;
  c.seed = 123456789012345ULL;
  const ModelParams p = fixtures::random_params(c, 5);
  const std::string text = checkpoint_to_json(Checkpoint{c, p, 11});
  const Checkpoint back = checkpoint_from_json(text);
  CHECK(back.n_pad == 11);
  CHECK(back.config.kl_weight == 0.03);
  CHECK(back.config.sampling == LatentSampling::AggregatedPosterior);
  CHECK(back.config.seed == c.seed);
  CHECK(back.config.decoder_hidden == c.decoder_hidden);
  CHECK(checkpoint_to_json(back) == text);
  std::vector<double> a, b;
  p.visit([&](const std::string&, const auto& m) { a.insert(a.end(), m.data(), m.data() + m.size()); });
  back.params.visit([&](const std::string&, const auto& m) { b.insert(b.end(), m.data(), m.data() + m.size()); });
  CHECK(a == b);
}

TEST_CASE("checkpoint keys follow the documented names") {
  const ModelConfig c = fixtures::tiny_config(3, 2);
  const std::string text = checkpoint_to_json(Checkpoint{c, ModelParams::zeros(c), 4});
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("format_version") == kCheckpointFormatVersion);
  for (const char* key : {"embedding", "gru_fwd.w_update", "gru_bwd.b_cand", "mlp_mu.0.weight",
                          "mlp_sigma.1.bias", "decoder.3.weight"}) {
    CAPTURE(key);
    CHECK(doc.at("params").contains(key));
  }
  CHECK(doc.at("config").at("kl_weight").is_null());
}

TEST_CASE("malformed checkpoints are rejected") {
  CHECK_THROWS_AS(checkpoint_from_json("{"), Error);
  const ModelConfig c = fixtures::tiny_config(3, 2);
  auto doc = nlohmann::json::parse(checkpoint_to_json(Checkpoint{c, ModelParams::zeros(c), 4}));
  doc["params"]["embedding"]["rows"] = 9;
  CHECK_THROWS_AS(checkpoint_from_json(doc.dump()), Error);
  doc = nlohmann::json::parse(checkpoint_to_json(Checkpoint{c, ModelParams::zeros(c), 4}));
  doc["format_version"] = 99;
  CHECK_THROWS_AS(checkpoint_from_json(doc.dump()), Error);
}
