#pragma once

// Kernels shared by the public encoder/decoder and the gradient code. All
// matrices here are feature-major: one column per node (or per node pair),
// restricted to the n real nodes.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/dagrnn.hpp"
#include "honeygraph/model.hpp"

namespace honeygraph::detail {

using PredecessorLists = std::vector<std::vector<Eigen::Index>>;

/// Predecessors of each real row: forward reads row i of `adjacency` below
/// the diagonal, backward reads row i above it.
PredecessorLists predecessor_lists(const Eigen::MatrixXd& adjacency, std::size_t n,
                                   Direction direction);

struct GruTrace {
  Eigen::MatrixXd prev;    // aggregated previous state per node (units, n)
  Eigen::MatrixXd update;  // u
  Eigen::MatrixXd reset;   // r
  Eigen::MatrixXd reset_prev;  // r * prev
  Eigen::MatrixXd cand;    // c
  Eigen::MatrixXd h;       // output state
};

GruTrace gru_forward(const Eigen::MatrixXd& x, const PredecessorLists& preds,
                     const GruParams& gru, Direction direction);

/// Accumulates parameter gradients into `grad` and input gradients into `dx`
/// given dLoss/dh for every node (excluding contributions through successors,
/// which are propagated here).
void gru_backward(const Eigen::MatrixXd& x, const PredecessorLists& preds, const GruParams& gru,
                  Direction direction, const GruTrace& trace, Eigen::MatrixXd dh,
                  GruParams& grad, Eigen::MatrixXd& dx);

/// Dense stack: ReLU on hidden layers, identity on the last.
struct MlpTrace {
  std::vector<Eigen::MatrixXd> pre;   // pre-activations per layer
  std::vector<Eigen::MatrixXd> post;  // ReLU outputs of hidden layers
};

MlpTrace mlp_forward(const Eigen::MatrixXd& input, std::span<const DenseParams> layers);
const Eigen::MatrixXd& mlp_output(const MlpTrace& trace);

/// Returns dLoss/dinput.
Eigen::MatrixXd mlp_backward(const Eigen::MatrixXd& input, std::span<const DenseParams> layers,
                             const MlpTrace& trace, const Eigen::MatrixXd& dout,
                             std::span<DenseParams> grad);

/// Pair list entries are (target row of z, source row of h).
using PairList = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

struct DecoderTrace {
  Eigen::MatrixXd z_proj;  // first-layer projection of z, (width, k)
  Eigen::MatrixXd h_proj;  // first-layer projection of h plus bias, (width, n)
  MlpTrace rest;           // layers after the first, input = relu(first)
  Eigen::MatrixXd first_pre;
  Eigen::MatrixXd first_post;
  Eigen::RowVectorXd logits;
};

DecoderTrace decoder_forward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h,
                             const PairList& pairs, const std::vector<DenseParams>& layers);

/// dlogits per pair -> parameter gradients plus dz (latent, k) and dh (units, n).
void decoder_backward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h, const PairList& pairs,
                      const std::vector<DenseParams>& layers, const DecoderTrace& trace,
                      const Eigen::RowVectorXd& dlogits, std::vector<DenseParams>& grad,
                      Eigen::MatrixXd& dz, Eigen::MatrixXd& dh);

/// Everything the encoder computes for the real nodes of one graph.
struct EncoderTrace {
  std::size_t n = 0;
  Eigen::MatrixXd x;  // embedded inputs (embed_dim, n)
  PredecessorLists preds_fwd;
  PredecessorLists preds_bwd;
  GruTrace fwd;
  GruTrace bwd;
  Eigen::MatrixXd h;  // fwd.h + bwd.h
  MlpTrace mu_trace;
  MlpTrace sigma_trace;
  Eigen::MatrixXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd z;
};

/// eps is (n_pad or n, latent) row-per-node; only its first n rows are read.
EncoderTrace encoder_forward(const GraphTensors& tensors, const ModelParams& params,
                             const Eigen::MatrixXd* eps);

/// All pairs (i, j) with j < i < n.
PairList lower_triangle_pairs(std::size_t n);

}  // namespace honeygraph::detail
