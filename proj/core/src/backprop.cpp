#include <cmath>

#include "dagrnn_internal.hpp"
#include "honeygraph/dagrnn.hpp"
#include "honeygraph/error.hpp"
#include "honeygraph/loss.hpp"
#include "honeygraph/trainer.hpp"

namespace honeygraph {

namespace {

// d focal_term / dp, zero where the clamp is active.
double focal_term_dp(double p, bool positive, double alpha, double gamma) {
  if (p <= kProbabilityEpsilon || p >= 1.0 - kProbabilityEpsilon) return 0.0;
  if (positive) {
    const double q = 1.0 - p;
    const double mod_grad = gamma == 0.0 ? 0.0 : gamma * std::pow(q, gamma - 1.0) * std::log(p);
    return alpha * mod_grad - alpha * std::pow(q, gamma) / p;
  }
  const double mod_grad = gamma == 0.0 ? 0.0 : gamma * std::pow(p, gamma - 1.0) * std::log(1.0 - p);
  return -(1.0 - alpha) * mod_grad + (1.0 - alpha) * std::pow(p, gamma) / (1.0 - p);
}

}  // namespace

LossBreakdown loss_and_gradient(const GraphTensors& tensors, const ModelParams& params,
                                const ModelConfig& config, const Eigen::MatrixXd& eps,
                                ModelParams* grad, double scale) {
  const detail::EncoderTrace t = detail::encoder_forward(tensors, params, &eps);
  const std::size_t n = t.n;
  const auto pairs = detail::lower_triangle_pairs(n);

  LossBreakdown loss;
  Eigen::RowVectorXd dlogits;
  detail::DecoderTrace dec;
  if (!pairs.empty()) {
    dec = detail::decoder_forward(t.z, t.h, pairs, params.decoder);
    dlogits.resize(static_cast<Eigen::Index>(pairs.size()));
    double sum = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double p = sigmoid(dec.logits(kk));
      const bool positive = tensors.adjacency(pairs[k].first, pairs[k].second) != 0.0;
      sum += focal_term(p, positive, config.focal_alpha, config.focal_gamma);
      dlogits(kk) = focal_term_dp(p, positive, config.focal_alpha, config.focal_gamma) * p * (1.0 - p);
    }
    loss.focal = sum / static_cast<double>(pairs.size());
  }

  const double nodes = static_cast<double>(n);
  double kl_sum = 0.0;
  for (Eigen::Index i = 0; i < t.mu.cols(); ++i) {
    for (Eigen::Index d = 0; d < t.mu.rows(); ++d) {
      const double m = t.mu(d, i);
      const double s = t.sigma(d, i);
      if (!(s > 0.0)) throw Error(ErrorKind::Domain, "sigma underflowed to zero");
      kl_sum += 0.5 * (m * m + s * s - 1.0 - 2.0 * std::log(s));
    }
  }
  loss.kl = n == 0 ? 0.0 : kl_sum / nodes;
  loss.total = weighted_loss(loss.focal, loss.kl, n, config.effective_kl_weight());

  if (grad == nullptr || n == 0) return loss;

  const Eigen::Index units = t.h.rows();
  const Eigen::Index latent = t.mu.rows();
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(latent, nn);
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(units, nn);

  if (!pairs.empty()) {
    const double focal_weight = scale * nodes * nodes / 2.0 / static_cast<double>(pairs.size());
    dlogits *= focal_weight;
    detail::decoder_backward(t.z, t.h, pairs, params.decoder, dec, dlogits, grad->decoder, dz, dh);
  }

  const double kl_weight = scale * config.effective_kl_weight() / nodes;
  const Eigen::MatrixXd eps_t = eps.topRows(nn).transpose();
  const Eigen::MatrixXd dmu = dz + kl_weight * t.mu;
  const Eigen::MatrixXd dsigma =
      dz.cwiseProduct(eps_t) +
      kl_weight * (t.sigma - t.sigma.cwiseInverse());
  const Eigen::MatrixXd& raw = detail::mlp_output(t.sigma_trace);
  const Eigen::MatrixXd draw =
      dsigma.cwiseProduct(raw.unaryExpr([](double v) { return sigmoid(v); }));

  dh += detail::mlp_backward(t.h, params.mlp_mu, t.mu_trace, dmu, grad->mlp_mu);
  dh += detail::mlp_backward(t.h, params.mlp_sigma, t.sigma_trace, draw, grad->mlp_sigma);

  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(t.x.rows(), nn);
  detail::gru_backward(t.x, t.preds_fwd, params.gru_fwd, Direction::Forward, t.fwd, dh,
                       grad->gru_fwd, dx);
  detail::gru_backward(t.x, t.preds_bwd, params.gru_bwd, Direction::Backward, t.bwd, dh,
                       grad->gru_bwd, dx);
  for (Eigen::Index i = 0; i < nn; ++i) {
    grad->embedding.row(tensors.types(i)) += dx.col(i).transpose();
  }
  return loss;
}

}  // namespace honeygraph
