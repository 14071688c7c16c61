#include "honeygraph/loss.hpp"

#include <algorithm>
#include <cmath>

#include "honeygraph/error.hpp"

namespace honeygraph {

double focal_term(double p, bool positive, double alpha, double gamma) noexcept {
  const double q = std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const double pt = positive ? q : 1.0 - q;
  const double at = positive ? alpha : 1.0 - alpha;
  return -at * std::pow(1.0 - pt, gamma) * std::log(pt);
}

double focal_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& scores,
                  const Eigen::VectorXd& mask, double alpha, double gamma) {
  if (targets.rows() != scores.rows() || targets.cols() != scores.cols() ||
      targets.rows() != mask.size() || targets.cols() != mask.size()) {
    throw Error(ErrorKind::ShapeMismatch, "focal_loss: targets, scores and mask disagree in shape");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < targets.rows(); ++i) {
    if (mask(i) == 0.0) continue;
    for (Eigen::Index j = 0; j < i; ++j) {
      if (mask(j) == 0.0) continue;
      sum += focal_term(scores(i, j), targets(i, j) != 0.0, alpha, gamma);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double kl_divergence(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& mask) {
  if (mu.rows() != sigma.rows() || mu.cols() != sigma.cols() || mu.rows() != mask.size()) {
    throw Error(ErrorKind::ShapeMismatch, "kl_divergence: mu, sigma and mask disagree in shape");
  }
  double sum = 0.0;
  std::size_t rows = 0;
  for (Eigen::Index i = 0; i < mu.rows(); ++i) {
    if (mask(i) == 0.0) continue;
    ++rows;
    for (Eigen::Index d = 0; d < mu.cols(); ++d) {
      const double s = sigma(i, d);
      if (!(s > 0.0)) throw Error(ErrorKind::Domain, "kl_divergence: sigma must be positive");
      const double m = mu(i, d);
      sum += 0.5 * (m * m + s * s - 1.0 - 2.0 * std::log(s));
    }
  }
  return rows == 0 ? 0.0 : sum / static_cast<double>(rows);
}

LossBreakdown total_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& scores,
                         const Eigen::MatrixXd& mu, const Eigen::MatrixXd& sigma,
                         const Eigen::VectorXd& mask, std::size_t n, std::size_t latent_dim,
                         double alpha, double gamma) {
  LossBreakdown b;
  b.focal = focal_loss(targets, scores, mask, alpha, gamma);
  b.kl = kl_divergence(mu, sigma, mask);
  b.total = compound_loss(b.focal, b.kl, n, latent_dim);
  return b;
}

}  // namespace honeygraph
