#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace honeygraph;

using namespace oracles;

TEST_CASE("analytic gradients match central differences on a 4-node graph") {
  const ModelConfig c = fixtures::tiny_config(3, 2);
  const ModelParams p = fixtures::random_params(c, 77);
  const GraphTensors t = to_matrices(fixtures::diamond(), 5);
  Rng rng = make_rng(78);
  const Eigen::MatrixXd eps = standard_normal(5, 2, rng);
  const auto errs = check_gradients(t, p, c, eps);
  CHECK(errs.size() == 35);
  for (const auto& e : errs) {
    CAPTURE(e.key);
    CHECK(e.rel <= 1e-3);
  }
}

TEST_CASE("gradients stay correct with a custom KL weight and the default sizes' structure") {
  ModelConfig c = fixtures::tiny_config(2, 3);
  c.kl_weight = 0.37;
  c.focal_alpha = 0.4;
  c.focal_gamma = 1.5;
  const ModelParams p = fixtures::random_params(c, 79);
  const GraphTensors t = to_matrices(fixtures::small_domain(), 8);
  Rng rng = make_rng(80);
  const Eigen::MatrixXd eps = standard_normal(8, 3, rng);
  for (const auto& e : check_gradients(t, p, c, eps)) {
    CAPTURE(e.key);
    CHECK(e.rel <= 1e-3);
  }
}

TEST_CASE("gradient accumulation honours the scale argument") {
  const ModelConfig c = fixtures::tiny_config(2, 2);
  const ModelParams p = fixtures::random_params(c, 81);
  const GraphTensors t = to_matrices(fixtures::diamond(), 4);
  const Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(4, 2);
  ModelParams once = ModelParams::zeros(c), twice = ModelParams::zeros(c);
  loss_and_gradient(t, p, c, eps, &once, 2.0);
  loss_and_gradient(t, p, c, eps, &twice, 1.0);
  loss_and_gradient(t, p, c, eps, &twice, 1.0);
  once.add_scaled(twice, -1.0);
  double worst = 0.0;
  once.visit([&](const std::string&, const auto& m) { worst = std::max(worst, m.cwiseAbs().maxCoeff()); });
  CHECK(worst < 1e-12);
}
