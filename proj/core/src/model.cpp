#include "honeygraph/model.hpp"

#include <cmath>

#include "honeygraph/error.hpp"
#include "honeygraph/graph.hpp"

namespace honeygraph {

void ModelConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, "model config: " + m); };
  if (embed_dim == 0 || gru_units == 0 || musigma_hidden == 0 || latent_dim == 0) {
    fail("layer widths must be positive");
  }
  for (std::size_t w : decoder_hidden) {
    if (w == 0) fail("decoder widths must be positive");
  }
  if (!(edge_threshold > 0.0 && edge_threshold < 1.0)) fail("edge_threshold must lie in (0, 1)");
  if (!(focal_gamma >= 0.0)) fail("focal_gamma must be non-negative");
  if (!(focal_alpha > 0.0 && focal_alpha < 1.0)) fail("focal_alpha must lie in (0, 1)");
  if (!(lr_initial > 0.0)) fail("lr_initial must be positive");
  if (!(lr_decay_rate > 0.0 && lr_decay_rate <= 1.0)) fail("lr_decay_rate must lie in (0, 1]");
  if (lr_decay_steps == 0) fail("lr_decay_steps must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (kl_weight && !(*kl_weight >= 0.0)) fail("kl_weight must be non-negative");
}

namespace {

GruParams gru_zeros(std::size_t input, std::size_t units) {
  const auto in = static_cast<Eigen::Index>(input);
  const auto u = static_cast<Eigen::Index>(units);
  GruParams g;
  g.w_update = g.w_reset = g.w_cand = Eigen::MatrixXd::Zero(u, in);
  g.u_update = g.u_reset = g.u_cand = Eigen::MatrixXd::Zero(u, u);
  g.b_update = g.b_reset = g.b_cand = Eigen::VectorXd::Zero(u);
  return g;
}

std::vector<DenseParams> mlp_zeros(const std::vector<std::size_t>& widths) {
  std::vector<DenseParams> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const auto in = static_cast<Eigen::Index>(widths[i]);
    const auto out = static_cast<Eigen::Index>(widths[i + 1]);
    layers.push_back(DenseParams{Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)});
  }
  return layers;
}

void glorot_uniform(Eigen::MatrixXd& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  std::uniform_real_distribution<double> d(-limit, limit);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = d(rng);
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& config) {
  ModelParams p;
  p.embedding = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kNodeTypeCount),
                                      static_cast<Eigen::Index>(config.embed_dim));
  p.gru_fwd = gru_zeros(config.embed_dim, config.gru_units);
  p.gru_bwd = gru_zeros(config.embed_dim, config.gru_units);
  p.mlp_mu = mlp_zeros({config.gru_units, config.musigma_hidden, config.latent_dim});
  p.mlp_sigma = mlp_zeros({config.gru_units, config.musigma_hidden, config.latent_dim});
  std::vector<std::size_t> dec{config.latent_dim + config.gru_units};
  dec.insert(dec.end(), config.decoder_hidden.begin(), config.decoder_hidden.end());
  dec.push_back(1);
  p.decoder = mlp_zeros(dec);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelParams p = zeros(config);
  glorot_uniform(p.embedding, rng);

  for (GruParams* g : {&p.gru_fwd, &p.gru_bwd}) {
    for (Eigen::MatrixXd* w : {&g->w_update, &g->w_reset, &g->w_cand, &g->u_update,
                               &g->u_reset, &g->u_cand}) {
      glorot_uniform(*w, rng);
    }
  }
  for (auto& layer : p.mlp_mu) glorot_uniform(layer.weight, rng);
  glorot_uniform(p.mlp_sigma.front().weight, rng);
  // Output layer of the sigma head stays zero: sigma starts at softplus(0).
  for (auto& layer : p.decoder) glorot_uniform(layer.weight, rng);
  return p;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t count = 0;
  visit([&count](const std::string&, const auto& a) { count += static_cast<std::size_t>(a.size()); });
  return count;
}

void ModelParams::set_zero() {
  visit([](const std::string&, auto& a) { a.setZero(); });
}

void ModelParams::add_scaled(const ModelParams& other, double scale) {
  std::vector<const double*> sources;
  std::vector<Eigen::Index> sizes;
  other.visit([&](const std::string&, const auto& a) {
    sources.push_back(a.data());
    sizes.push_back(a.size());
  });
  std::size_t k = 0;
  visit([&](const std::string& key, auto& a) {
    if (k >= sources.size() || sizes[k] != a.size()) {
      throw Error(ErrorKind::ShapeMismatch, "parameter shape mismatch at " + key);
    }
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] += scale * sources[k][i];
    ++k;
  });
}

bool ModelParams::all_finite() const {
  bool ok = true;
  visit([&ok](const std::string&, const auto& a) { ok = ok && a.allFinite(); });
  return ok;
}

}  // namespace honeygraph
