#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "honeygraph/model.hpp"
#include "honeygraph/random.hpp"
#include "honeygraph/tensors.hpp"

namespace honeygraph {

enum class Direction {
  Forward,   // rows in order, predecessors from A (strictly lower)
  Backward,  // rows in reverse, predecessors from A^T (strictly upper)
};

struct EncodeResult {
  Eigen::MatrixXd h;      // (n_pad, gru_units) = h_fwd + h_bwd
  Eigen::MatrixXd h_fwd;
  Eigen::MatrixXd h_bwd;
  Eigen::MatrixXd mu;     // (n_pad, latent_dim)
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd z;
};

/// Embedding lookup, masked: padded rows are zero.
Eigen::MatrixXd embed(const Eigen::VectorXi& types, const Eigen::VectorXd& mask,
                      const Eigen::MatrixXd& embedding);

/// One direction of the DAG-RNN. Each real row's previous state is the sum of
/// the already computed states of its predecessors under `adjacency`.
/// Throws ShapeMismatch if the adjacency is not strictly triangular in the
/// orientation `direction` requires.
Eigen::MatrixXd dagrnn_direction(const Eigen::MatrixXd& x_prime,
                                 const Eigen::MatrixXd& adjacency,
                                 const Eigen::VectorXd& mask, const GruParams& gru,
                                 Direction direction);

/// Full encoder with explicit standard-normal noise `eps` (n_pad, latent_dim).
EncodeResult encode(const GraphTensors& tensors, const ModelParams& params,
                    const Eigen::MatrixXd& eps);

/// Full encoder drawing eps from `rng`.
EncodeResult encode(const GraphTensors& tensors, const ModelParams& params, Rng& rng);

/// Deterministic encoder: z = mu.
EncodeResult encode_mean(const GraphTensors& tensors, const ModelParams& params);

/// Scores every (target row of z, source row of h) pair:
/// out(i, j) = sigmoid(decoder([z_i, h_j])).
Eigen::MatrixXd decode(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h,
                       const ModelParams& params);

/// Training-time reconstruction: scores for pairs (i, j), j < i < n, stored in
/// an (n_pad, n_pad) matrix that is zero elsewhere.
Eigen::MatrixXd reconstruct(const GraphTensors& tensors, const EncodeResult& encoded,
                            const ModelParams& params);

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

double softplus(double x) noexcept;
double sigmoid(double x) noexcept;

}  // namespace honeygraph
