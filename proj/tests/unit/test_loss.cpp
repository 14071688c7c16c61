#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace honeygraph;

namespace {

// 2x2 lower-triangular setup with one scored entry at (1, 0).
double single_entry(double p, bool y, double alpha, double gamma) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2), s = Eigen::MatrixXd::Zero(2, 2);
  t(1, 0) = y ? 1.0 : 0.0;
  s(1, 0) = p;
  return focal_loss(t, s, Eigen::VectorXd::Ones(2), alpha, gamma);
}

}  // namespace

TEST_CASE("focal loss examples") {
  CHECK(single_entry(0.999999, true, 0.25, 2.0) < 1e-12);
  CHECK(single_entry(0.3, true, 0.25, 2.0) == doctest::Approx(0.25 * 0.49 * -std::log(0.3)).epsilon(1e-12));
  CHECK(single_entry(0.3, true, 0.25, 2.0) == doctest::Approx(0.14747).epsilon(1e-4));
  CHECK(single_entry(0.3, false, 0.25, 2.0) == doctest::Approx(0.75 * 0.09 * -std::log(0.7)).epsilon(1e-12));
}

TEST_CASE("gamma 0 and alpha 0.5 is half of binary cross-entropy") {
  Rng rng = make_rng(1);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 9;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n), s = Eigen::MatrixXd::Zero(n, n);
    double bce = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        t(i, j) = coin(rng) ? 1.0 : 0.0;
        s(i, j) = u(rng);
        bce += -(t(i, j) * std::log(s(i, j)) + (1.0 - t(i, j)) * std::log(1.0 - s(i, j)));
        ++count;
      }
    }
    bce /= count;
    CHECK(std::abs(focal_loss(t, s, Eigen::VectorXd::Ones(n), 0.5, 0.0) - 0.5 * bce) <= 1e-9);
  }
}

TEST_CASE("focal loss ignores padding and the upper triangle, clamps extremes") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3), s = Eigen::MatrixXd::Constant(3, 3, 0.9);
  t(1, 0) = 1;
  s(1, 0) = 0.3;
  Eigen::VectorXd mask(3);
  mask << 1, 1, 0;
  CHECK(focal_loss(t, s, mask, 0.25, 2.0) == doctest::Approx(single_entry(0.3, true, 0.25, 2.0)));
  CHECK(std::isfinite(single_entry(0.0, true, 0.25, 2.0)));
  CHECK(single_entry(0.0, true, 0.25, 2.0) == doctest::Approx(-0.25 * std::log(1e-7)).epsilon(1e-6));
  CHECK(focal_loss(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1), 0.25, 2.0) == 0.0);
}

TEST_CASE("KL closed form examples") {
  const Eigen::VectorXd mask = Eigen::VectorXd::Ones(3);
  CHECK(kl_divergence(Eigen::MatrixXd::Zero(3, 4), Eigen::MatrixXd::Ones(3, 4), mask) == 0.0);
  CHECK(kl_divergence(Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1)) ==
        doctest::Approx(0.5));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(1, 1) = 0.0;
  try {
    kl_divergence(Eigen::MatrixXd::Zero(2, 2), bad, Eigen::VectorXd::Ones(2));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  // Padded rows may hold anything.
  Eigen::VectorXd half(2);
  half << 1, 0;
  CHECK(kl_divergence(Eigen::MatrixXd::Zero(2, 2), bad, half) == 0.0);
}

TEST_CASE("KL closed form matches a Monte-Carlo estimate at 1e6 samples") {
  Rng rng = make_rng(2024);
  std::uniform_real_distribution<double> um(-1.0, 1.0), us(0.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::Index dims = 2;
    Eigen::MatrixXd mu(1, dims), sigma(1, dims);
    for (Eigen::Index d = 0; d < dims; ++d) {
      mu(0, d) = um(rng);
      sigma(0, d) = us(rng);
    }
    const double closed = kl_divergence(mu, sigma, Eigen::VectorXd::Ones(1));
    // E_P[log P(x) - log Q(x)] with x ~ P.
    const int samples = 1000000;
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      for (Eigen::Index d = 0; d < dims; ++d) {
        const double e = gauss(rng);
        const double x = mu(0, d) + sigma(0, d) * e;
        acc += -std::log(sigma(0, d)) - 0.5 * e * e + 0.5 * x * x;
      }
    }
    CHECK(std::abs(acc / samples - closed) <= 1e-2);
  }
}

TEST_CASE("KL is non-negative and zero only at the prior") {
  Rng rng = make_rng(3);
  std::uniform_real_distribution<double> um(-2.0, 2.0), us(0.05, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::MatrixXd mu(2, 3), sigma(2, 3);
    for (Eigen::Index k = 0; k < 6; ++k) {
      mu.data()[k] = um(rng);
      sigma.data()[k] = us(rng);
    }
    CHECK(kl_divergence(mu, sigma, Eigen::VectorXd::Ones(2)) > 0.0);
  }
}

TEST_CASE("compound loss arithmetic") {
  CHECK(compound_loss(0.1, 0.2, 10, 32) == doctest::Approx(11.4));
  CHECK(weighted_loss(0.1, 0.2, 10, 0.5) == doctest::Approx(5.1));
  ModelConfig c;
  CHECK(c.effective_kl_weight() == 32.0);
  c.kl_weight = 0.03;
  CHECK(c.effective_kl_weight() == 0.03);
  // Perfect reconstruction and prior-matched latents.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3), s = Eigen::MatrixXd::Zero(3, 3);
  t(1, 0) = t(2, 1) = 1.0;
  s(1, 0) = s(2, 1) = 1.0;
  const LossBreakdown l = total_loss(t, s, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Ones(3, 2),
                                     Eigen::VectorXd::Ones(3), 3, 2, 0.25, 2.0);
  CHECK(l.total < 1e-9);
}
