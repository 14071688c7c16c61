#include "honeygraph/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "honeygraph/dagrnn.hpp"
#include "honeygraph/error.hpp"

namespace honeygraph {

namespace {

struct Block {
  double* data;
  Eigen::Index size;
};

std::vector<Block> blocks_of(ModelParams& p) {
  std::vector<Block> out;
  p.visit([&out](const std::string&, auto& a) { out.push_back(Block{a.data(), a.size()}); });
  return out;
}

std::vector<const double*> const_blocks_of(const ModelParams& p) {
  std::vector<const double*> out;
  p.visit([&out](const std::string&, const auto& a) { out.push_back(a.data()); });
  return out;
}

// Seeds for the independent random streams used in training.
enum Stream : std::uint64_t { kInit = 1, kShuffle = 2, kTrainNoise = 3, kValNoise = 4 };

}  // namespace

AdamOptimizer::AdamOptimizer(const ModelParams& like, double lr_initial, double decay_rate,
                             std::size_t decay_steps, double beta1, double beta2, double epsilon)
    : m_(like),
      v_(like),
      lr_initial_(lr_initial),
      decay_rate_(decay_rate),
      decay_steps_(decay_steps),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {
  m_.set_zero();
  v_.set_zero();
}

double AdamOptimizer::learning_rate() const {
  return lr_initial_ *
         std::pow(decay_rate_, static_cast<double>(step_) / static_cast<double>(decay_steps_));
}

void AdamOptimizer::step(ModelParams& params, const ModelParams& grad) {
  const double lr = learning_rate();
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  auto p = blocks_of(params);
  auto m = blocks_of(m_);
  auto v = blocks_of(v_);
  auto g = const_blocks_of(grad);
  for (std::size_t b = 0; b < p.size(); ++b) {
    for (Eigen::Index i = 0; i < p[b].size; ++i) {
      const double gi = g[b][i];
      double& mi = m[b].data[i];
      double& vi = v[b].data[i];
      mi = beta1_ * mi + (1.0 - beta1_) * gi;
      vi = beta2_ * vi + (1.0 - beta2_) * gi * gi;
      p[b].data[i] -= lr * (mi / c1) / (std::sqrt(vi / c2) + epsilon_);
    }
  }
}

LossBreakdown mean_loss(const std::vector<GraphTensors>& graphs, const ModelParams& params,
                        const ModelConfig& config, std::uint64_t noise_seed) {
  LossBreakdown mean;
  if (graphs.empty()) return mean;
  const auto latent = static_cast<Eigen::Index>(config.latent_dim);
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    Rng rng = make_rng(noise_seed, {g});
    const Eigen::MatrixXd eps =
        standard_normal(static_cast<Eigen::Index>(graphs[g].n), latent, rng);
    const LossBreakdown l = loss_and_gradient(graphs[g], params, config, eps, nullptr);
    mean.total += l.total;
    mean.focal += l.focal;
    mean.kl += l.kl;
  }
  const double count = static_cast<double>(graphs.size());
  mean.total /= count;
  mean.focal /= count;
  mean.kl /= count;
  return mean;
}

TrainResult train(const Dataset& dataset, const ModelConfig& config, const TrainOptions& options) {
  config.validate();
  if (dataset.graphs.empty()) throw Error(ErrorKind::InvalidArgument, "train: empty dataset");

  TrainResult result;
  result.n_pad = dataset.max_node_count();

  std::vector<std::size_t> train_idx = dataset.indices(Split::Train);
  if (options.train_limit && train_idx.size() > *options.train_limit) {
    train_idx.resize(*options.train_limit);
  }
  if (train_idx.empty()) throw Error(ErrorKind::InvalidArgument, "train: no training graphs");

  std::vector<GraphTensors> train_set;
  for (std::size_t i : train_idx) train_set.push_back(to_matrices(dataset.graphs[i], result.n_pad));
  std::vector<GraphTensors> val_set;
  for (std::size_t i : dataset.indices(Split::Validation)) {
    val_set.push_back(to_matrices(dataset.graphs[i], result.n_pad));
  }

  if (options.initial) {
    result.params = *options.initial;
  } else {
    Rng init_rng = make_rng(config.seed, {kInit});
    result.params = ModelParams::initialize(config, init_rng);
  }
  result.best_val_loss = std::numeric_limits<double>::quiet_NaN();
  if (config.epochs == 0) return result;

  ModelParams params = result.params;
  ModelParams grad = ModelParams::zeros(config);
  AdamOptimizer adam(params, config.lr_initial, config.lr_decay_rate, config.lr_decay_steps);
  const auto latent = static_cast<Eigen::Index>(config.latent_dim);
  const std::uint64_t val_seed = derive_seed(config.seed, {kValNoise});

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng shuffle_rng = make_rng(config.seed, {kShuffle, epoch});
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    LossBreakdown sums;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      grad.set_zero();
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t g = order[b];
        Rng noise_rng = make_rng(config.seed, {kTrainNoise, epoch, g});
        const Eigen::MatrixXd eps =
            standard_normal(static_cast<Eigen::Index>(train_set[g].n), latent, noise_rng);
        LossBreakdown l;
        try {
          l = loss_and_gradient(train_set[g], params, config, eps, &grad, scale);
        } catch (const Error& e) {
          // A NaN sigma surfaces as a domain error inside the KL term.
          if (e.kind() != ErrorKind::Domain) throw;
          l.total = std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(l.total)) {
          throw Error(ErrorKind::Divergence, "non-finite training loss at epoch " +
                                                 std::to_string(epoch) + ", graph " +
                                                 std::to_string(train_idx[g]));
        }
        sums.total += l.total;
        sums.focal += l.focal;
        sums.kl += l.kl;
      }
      if (!grad.all_finite()) {
        throw Error(ErrorKind::Divergence, "non-finite gradient at epoch " + std::to_string(epoch));
      }
      adam.step(params, grad);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    const double count = static_cast<double>(train_set.size());
    rec.train_loss = sums.total / count;
    rec.train_focal = sums.focal / count;
    rec.train_kl = sums.kl / count;
    rec.val_loss = val_set.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : mean_loss(val_set, params, config, val_seed).total;
    if (!params.all_finite()) {
      throw Error(ErrorKind::Divergence, "parameters became non-finite at epoch " + std::to_string(epoch));
    }
    result.history.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);

    const double score = val_set.empty() ? rec.train_loss : rec.val_loss;
    if (score < best) {
      best = score;
      result.best_epoch = epoch;
      result.best_val_loss = score;
      result.params = params;
    }
  }
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_loss,train_focal,train_kl,val_loss\n";
  char buf[256];
  for (const EpochRecord& r : history) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g,%.10g\n", r.epoch, r.train_loss,
                  r.train_focal, r.train_kl, r.val_loss);
    out += buf;
  }
  return out;
}

}  // namespace honeygraph
