#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace honeygraph {

inline constexpr double kProbabilityEpsilon = 1e-7;

/// Per-entry focal loss -alpha_t (1 - p_t)^gamma log(p_t) with p clamped to
/// [eps, 1 - eps].
double focal_term(double p, bool positive, double alpha, double gamma) noexcept;

/// Mean focal loss over the masked strictly-lower-triangular entries of
/// `targets` / `scores`. Returns 0 when no entry contributes.
double focal_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& scores,
                  const Eigen::VectorXd& mask, double alpha, double gamma);

/// Mean over real rows of 1/2 sum_d (mu^2 + sigma^2 - 1 - ln sigma^2).
/// Throws Error(Domain) if a real-row sigma is not positive.
double kl_divergence(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& sigma,
                     const Eigen::VectorXd& mask);

/// (n^2 / 2) * focal + kl_weight * kl.
inline double weighted_loss(double focal, double kl, std::size_t n, double kl_weight) noexcept {
  const double nn = static_cast<double>(n);
  return nn * nn / 2.0 * focal + kl_weight * kl;
}

/// (n^2 / 2) * focal + latent_dim * kl.
inline double compound_loss(double focal, double kl, std::size_t n,
                            std::size_t latent_dim) noexcept {
  return weighted_loss(focal, kl, n, static_cast<double>(latent_dim));
}

struct LossBreakdown {
  double total = 0.0;
  double focal = 0.0;
  double kl = 0.0;
};

LossBreakdown total_loss(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& scores,
                         const Eigen::MatrixXd& mu, const Eigen::MatrixXd& sigma,
                         const Eigen::VectorXd& mask, std::size_t n,
                         std::size_t latent_dim, double alpha, double gamma);

}  // namespace honeygraph
