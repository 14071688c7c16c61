#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "honeygraph/dataset.hpp"
#include "honeygraph/loss.hpp"
#include "honeygraph/model.hpp"
#include "honeygraph/tensors.hpp"

namespace honeygraph {

/// Loss of one graph under fixed noise `eps`; adds scale * dLoss/dParams into
/// `grad` when it is non-null.
LossBreakdown loss_and_gradient(const GraphTensors& tensors, const ModelParams& params,
                                const ModelConfig& config, const Eigen::MatrixXd& eps,
                                ModelParams* grad, double scale = 1.0);

/// Adam with learning rate lr_initial * decay_rate^(step / decay_steps).
class AdamOptimizer {
 public:
  AdamOptimizer(const ModelParams& like, double lr_initial, double decay_rate,
                std::size_t decay_steps, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-7);

  void step(ModelParams& params, const ModelParams& grad);
  double learning_rate() const;
  std::size_t steps() const noexcept { return step_; }

 private:
  ModelParams m_;
  ModelParams v_;
  double lr_initial_;
  double decay_rate_;
  std::size_t decay_steps_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::size_t step_ = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_focal = 0.0;
  double train_kl = 0.0;
  double val_loss = 0.0;  // NaN when there is no validation split
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when the initial params are returned
  double best_val_loss = 0.0;
  std::size_t n_pad = 0;
};

struct TrainOptions {
  std::optional<ModelParams> initial;  // resume from these weights
  std::optional<std::size_t> train_limit;  // use only the first N training graphs
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Mini-batch Adam over the train split for config.epochs, keeping the
/// parameters with the lowest validation loss (training loss if the dataset
/// has no validation graphs). Throws Error(Divergence) on a non-finite loss.
TrainResult train(const Dataset& dataset, const ModelConfig& config,
                  const TrainOptions& options = {});

/// Mean loss over the given graphs with a fixed noise stream per graph.
LossBreakdown mean_loss(const std::vector<GraphTensors>& graphs, const ModelParams& params,
                        const ModelConfig& config, std::uint64_t noise_seed);

std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace honeygraph
