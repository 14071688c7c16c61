#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/random.hpp"

namespace honeygraph {

/// How generation-time latent rows are drawn.
enum class LatentSampling {
  Prior,                // N(0, I)
  AggregatedPosterior,  // N(mean of mu, mean of sigma^2) over the graph's nodes
};

struct ModelConfig {
  std::size_t embed_dim = 6;
  std::size_t gru_units = 64;
  std::size_t musigma_hidden = 32;
  std::size_t latent_dim = 32;
  std::vector<std::size_t> decoder_hidden = {64, 64, 32};
  double edge_threshold = 0.2;
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
  double lr_initial = 1e-3;
  double lr_decay_rate = 0.96;
  std::size_t lr_decay_steps = 1000;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  LatentSampling sampling = LatentSampling::Prior;
  /// Weight of the KL term. Unset means latent_dim.
  std::optional<double> kl_weight;

  double effective_kl_weight() const noexcept {
    return kl_weight ? *kl_weight : static_cast<double>(latent_dim);
  }

  void validate() const;
};

/// Dense layer y = W x + b with W of shape (out, in).
struct DenseParams {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// GRU cell. Input weights are (units, input), recurrent weights (units, units).
///   u = sigmoid(w_update x + u_update s + b_update)
///   r = sigmoid(w_reset x + u_reset s + b_reset)
///   c = tanh(w_cand x + u_cand (r * s) + b_cand)
///   h = u * s + (1 - u) * c
struct GruParams {
  Eigen::MatrixXd w_update, w_reset, w_cand;
  Eigen::MatrixXd u_update, u_reset, u_cand;
  Eigen::VectorXd b_update, b_reset, b_cand;
};

struct ModelParams {
  Eigen::MatrixXd embedding;  // (kNodeTypeCount, embed_dim)
  GruParams gru_fwd;
  GruParams gru_bwd;
  std::vector<DenseParams> mlp_mu;     // gru_units -> musigma_hidden -> latent_dim
  std::vector<DenseParams> mlp_sigma;  // same shape, softplus on the output
  std::vector<DenseParams> decoder;    // (latent_dim + gru_units) -> hidden... -> 1

  /// Zero-valued parameters with every shape implied by `config`.
  static ModelParams zeros(const ModelConfig& config);

  /// Glorot-uniform weights, zero biases, zero sigma output weights.
  static ModelParams initialize(const ModelConfig& config, Rng& rng);

  /// Visits every parameter array with its checkpoint key, in a fixed order.
  template <class F>
  void visit(F&& f);
  template <class F>
  void visit(F&& f) const;

  std::size_t parameter_count() const;
  void set_zero();
  /// this += scale * other (shapes must match).
  void add_scaled(const ModelParams& other, double scale);
  bool all_finite() const;
};

// Implementation of the visitor. Matrices and vectors are both passed as
// Eigen dense objects so callers can use a generic lambda.
namespace detail {
template <class P, class F>
void visit_gru(P& g, const std::string& prefix, F& f) {
  f(prefix + ".w_update", g.w_update);
  f(prefix + ".w_reset", g.w_reset);
  f(prefix + ".w_cand", g.w_cand);
  f(prefix + ".u_update", g.u_update);
  f(prefix + ".u_reset", g.u_reset);
  f(prefix + ".u_cand", g.u_cand);
  f(prefix + ".b_update", g.b_update);
  f(prefix + ".b_reset", g.b_reset);
  f(prefix + ".b_cand", g.b_cand);
}

template <class L, class F>
void visit_layers(L& layers, const std::string& prefix, F& f) {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    f(prefix + "." + std::to_string(i) + ".weight", layers[i].weight);
    f(prefix + "." + std::to_string(i) + ".bias", layers[i].bias);
  }
}

template <class P, class F>
void visit_params(P& p, F& f) {
  f(std::string("embedding"), p.embedding);
  visit_gru(p.gru_fwd, "gru_fwd", f);
  visit_gru(p.gru_bwd, "gru_bwd", f);
  visit_layers(p.mlp_mu, "mlp_mu", f);
  visit_layers(p.mlp_sigma, "mlp_sigma", f);
  visit_layers(p.decoder, "decoder", f);
}
}  // namespace detail

template <class F>
void ModelParams::visit(F&& f) {
  detail::visit_params(*this, f);
}

template <class F>
void ModelParams::visit(F&& f) const {
  detail::visit_params(*this, f);
}

}  // namespace honeygraph
