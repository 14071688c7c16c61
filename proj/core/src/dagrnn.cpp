#include "honeygraph/dagrnn.hpp"

#include <cmath>

#include "dagrnn_internal.hpp"
#include "honeygraph/error.hpp"
#include "honeygraph/graph.hpp"

namespace honeygraph {

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) noexcept {
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill so the first rows of a larger draw match a smaller one.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = d(rng);
  }
  return m;
}

namespace detail {

namespace {

Eigen::MatrixXd relu_of(const Eigen::MatrixXd& a) { return a.cwiseMax(0.0); }

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

}  // namespace

PredecessorLists predecessor_lists(const Eigen::MatrixXd& adjacency, std::size_t n,
                                   Direction direction) {
  const auto nn = static_cast<Eigen::Index>(n);
  if (adjacency.rows() < nn || adjacency.cols() < nn) {
    throw Error(ErrorKind::ShapeMismatch, "adjacency smaller than the node count");
  }
  PredecessorLists preds(n);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      if (adjacency(i, j) == 0.0) continue;
      const bool ok = direction == Direction::Forward ? j < i : j > i;
      if (!ok) {
        throw Error(ErrorKind::ShapeMismatch,
                    direction == Direction::Forward
                        ? "forward adjacency must be strictly lower triangular"
                        : "backward adjacency must be strictly upper triangular");
      }
      preds[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return preds;
}

GruTrace gru_forward(const Eigen::MatrixXd& x, const PredecessorLists& preds,
                     const GruParams& gru, Direction direction) {
  const Eigen::Index units = gru.b_update.size();
  const auto n = static_cast<Eigen::Index>(preds.size());
  GruTrace t;
  t.prev = Eigen::MatrixXd::Zero(units, n);
  t.update.resize(units, n);
  t.reset.resize(units, n);
  t.reset_prev.resize(units, n);
  t.cand.resize(units, n);
  t.h.resize(units, n);

  const Eigen::MatrixXd xu = (gru.w_update * x).colwise() + gru.b_update;
  const Eigen::MatrixXd xr = (gru.w_reset * x).colwise() + gru.b_reset;
  const Eigen::MatrixXd xc = (gru.w_cand * x).colwise() + gru.b_cand;

  Eigen::VectorXd s(units), u(units), r(units), rs(units), c(units);
  for (Eigen::Index step = 0; step < n; ++step) {
    const Eigen::Index i = direction == Direction::Forward ? step : n - 1 - step;
    s.setZero();
    for (Eigen::Index j : preds[static_cast<std::size_t>(i)]) s += t.h.col(j);
    u = (xu.col(i) + gru.u_update * s).unaryExpr([](double v) { return sigmoid(v); });
    r = (xr.col(i) + gru.u_reset * s).unaryExpr([](double v) { return sigmoid(v); });
    rs = r.cwiseProduct(s);
    c = (xc.col(i) + gru.u_cand * rs).array().tanh().matrix();
    t.prev.col(i) = s;
    t.update.col(i) = u;
    t.reset.col(i) = r;
    t.reset_prev.col(i) = rs;
    t.cand.col(i) = c;
    t.h.col(i) = u.cwiseProduct(s) + (Eigen::VectorXd::Ones(units) - u).cwiseProduct(c);
  }
  return t;
}

void gru_backward(const Eigen::MatrixXd& x, const PredecessorLists& preds, const GruParams& gru,
                  Direction direction, const GruTrace& t, Eigen::MatrixXd dh, GruParams& grad,
                  Eigen::MatrixXd& dx) {
  const Eigen::Index units = gru.b_update.size();
  const auto n = static_cast<Eigen::Index>(preds.size());
  Eigen::MatrixXd da_u(units, n), da_r(units, n), da_c(units, n);

  Eigen::VectorXd ds(units);
  // Reverse of the processing order: successors are finished before a node.
  for (Eigen::Index step = n - 1; step >= 0; --step) {
    const Eigen::Index i = direction == Direction::Forward ? step : n - 1 - step;
    const auto g = dh.col(i);
    const auto u = t.update.col(i);
    const auto r = t.reset.col(i);
    const auto c = t.cand.col(i);
    const auto s = t.prev.col(i);

    const Eigen::VectorXd du = g.cwiseProduct(s - c);
    const Eigen::VectorXd dc = g.cwiseProduct(Eigen::VectorXd::Ones(units) - u);
    ds = g.cwiseProduct(u);

    da_c.col(i) = dc.array() * (1.0 - c.array().square());
    const Eigen::VectorXd drs = gru.u_cand.transpose() * da_c.col(i);
    ds += drs.cwiseProduct(r);
    const Eigen::VectorXd dr = drs.cwiseProduct(s);
    da_r.col(i) = dr.array() * r.array() * (1.0 - r.array());
    da_u.col(i) = du.array() * u.array() * (1.0 - u.array());
    ds += gru.u_reset.transpose() * da_r.col(i);
    ds += gru.u_update.transpose() * da_u.col(i);

    for (Eigen::Index j : preds[static_cast<std::size_t>(i)]) dh.col(j) += ds;
  }

  grad.w_update += da_u * x.transpose();
  grad.w_reset += da_r * x.transpose();
  grad.w_cand += da_c * x.transpose();
  grad.u_update += da_u * t.prev.transpose();
  grad.u_reset += da_r * t.prev.transpose();
  grad.u_cand += da_c * t.reset_prev.transpose();
  grad.b_update += da_u.rowwise().sum();
  grad.b_reset += da_r.rowwise().sum();
  grad.b_cand += da_c.rowwise().sum();
  dx += gru.w_update.transpose() * da_u + gru.w_reset.transpose() * da_r +
        gru.w_cand.transpose() * da_c;
}

MlpTrace mlp_forward(const Eigen::MatrixXd& input, std::span<const DenseParams> layers) {
  MlpTrace t;
  t.pre.reserve(layers.size());
  t.post.reserve(layers.size());
  const Eigen::MatrixXd* in = &input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    t.pre.push_back((layers[l].weight * *in).colwise() + layers[l].bias);
    if (l + 1 < layers.size()) {
      t.post.push_back(relu_of(t.pre.back()));
      in = &t.post.back();
    }
  }
  return t;
}

const Eigen::MatrixXd& mlp_output(const MlpTrace& trace) { return trace.pre.back(); }

Eigen::MatrixXd mlp_backward(const Eigen::MatrixXd& input, std::span<const DenseParams> layers,
                             const MlpTrace& trace, const Eigen::MatrixXd& dout,
                             std::span<DenseParams> grad) {
  Eigen::MatrixXd dpre = dout;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Eigen::MatrixXd& in = l == 0 ? input : trace.post[l - 1];
    grad[l].weight += dpre * in.transpose();
    grad[l].bias += dpre.rowwise().sum();
    Eigen::MatrixXd din = layers[l].weight.transpose() * dpre;
    if (l == 0) return din;
    dpre = din.cwiseProduct(relu_mask(trace.pre[l - 1]));
  }
  return dpre;
}

DecoderTrace decoder_forward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h,
                             const PairList& pairs, const std::vector<DenseParams>& layers) {
  const DenseParams& first = layers.front();
  const Eigen::Index latent = z.rows();
  const Eigen::Index units = h.rows();
  if (first.weight.cols() != latent + units) {
    throw Error(ErrorKind::ShapeMismatch, "decoder input width does not match [z, h]");
  }
  DecoderTrace t;
  t.z_proj = first.weight.leftCols(latent) * z;
  t.h_proj = (first.weight.rightCols(units) * h).colwise() + first.bias;
  const auto p = static_cast<Eigen::Index>(pairs.size());
  t.first_pre.resize(first.weight.rows(), p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    t.first_pre.col(k) = t.z_proj.col(i) + t.h_proj.col(j);
  }
  t.first_post = relu_of(t.first_pre);
  t.rest = mlp_forward(t.first_post, std::span<const DenseParams>(layers).subspan(1));
  t.logits = mlp_output(t.rest).row(0);
  return t;
}

void decoder_backward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h, const PairList& pairs,
                      const std::vector<DenseParams>& layers, const DecoderTrace& t,
                      const Eigen::RowVectorXd& dlogits, std::vector<DenseParams>& grad,
                      Eigen::MatrixXd& dz, Eigen::MatrixXd& dh) {
  const Eigen::MatrixXd dfirst_post =
      mlp_backward(t.first_post, std::span<const DenseParams>(layers).subspan(1), t.rest, dlogits,
                   std::span<DenseParams>(grad).subspan(1));

  const Eigen::MatrixXd dfirst = dfirst_post.cwiseProduct(relu_mask(t.first_pre));
  Eigen::MatrixXd dz_proj = Eigen::MatrixXd::Zero(t.z_proj.rows(), t.z_proj.cols());
  Eigen::MatrixXd dh_proj = Eigen::MatrixXd::Zero(t.h_proj.rows(), t.h_proj.cols());
  for (Eigen::Index k = 0; k < dfirst.cols(); ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    dz_proj.col(i) += dfirst.col(k);
    dh_proj.col(j) += dfirst.col(k);
  }
  const Eigen::Index latent = z.rows();
  const Eigen::Index units = h.rows();
  const DenseParams& first = layers.front();
  grad[0].weight.leftCols(latent) += dz_proj * z.transpose();
  grad[0].weight.rightCols(units) += dh_proj * h.transpose();
  grad[0].bias += dh_proj.rowwise().sum();
  dz += first.weight.leftCols(latent).transpose() * dz_proj;
  dh += first.weight.rightCols(units).transpose() * dh_proj;
}

PairList lower_triangle_pairs(std::size_t n) {
  PairList pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      pairs.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return pairs;
}

EncoderTrace encoder_forward(const GraphTensors& tensors, const ModelParams& params,
                             const Eigen::MatrixXd* eps) {
  EncoderTrace t;
  t.n = tensors.n;
  const auto n = static_cast<Eigen::Index>(tensors.n);
  const Eigen::Index embed_dim = params.embedding.cols();
  t.x.resize(embed_dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int type = tensors.types(i);
    if (type < 0 || type >= static_cast<int>(kNodeTypeCount)) {
      throw Error(ErrorKind::InvalidArgument, "node type index out of range");
    }
    t.x.col(i) = params.embedding.row(type).transpose();
  }
  t.preds_fwd = predecessor_lists(tensors.adjacency, tensors.n, Direction::Forward);
  t.preds_bwd = predecessor_lists(tensors.adjacency_t, tensors.n, Direction::Backward);
  t.fwd = gru_forward(t.x, t.preds_fwd, params.gru_fwd, Direction::Forward);
  t.bwd = gru_forward(t.x, t.preds_bwd, params.gru_bwd, Direction::Backward);
  t.h = t.fwd.h + t.bwd.h;

  t.mu_trace = mlp_forward(t.h, params.mlp_mu);
  t.sigma_trace = mlp_forward(t.h, params.mlp_sigma);
  t.mu = mlp_output(t.mu_trace);
  t.sigma = mlp_output(t.sigma_trace).unaryExpr([](double v) { return softplus(v); });
  if (eps) {
    if (eps->rows() < n || eps->cols() != t.mu.rows()) {
      throw Error(ErrorKind::ShapeMismatch, "noise matrix must be (n, latent_dim)");
    }
    t.z = t.mu + t.sigma.cwiseProduct(eps->topRows(n).transpose());
  } else {
    t.z = t.mu;
  }
  return t;
}

}  // namespace detail

namespace {

Eigen::MatrixXd padded_rows(const Eigen::MatrixXd& feature_major, std::size_t n_pad) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_pad), feature_major.rows());
  out.topRows(feature_major.cols()) = feature_major.transpose();
  return out;
}

EncodeResult to_result(const detail::EncoderTrace& t, std::size_t n_pad) {
  EncodeResult r;
  r.h = padded_rows(t.h, n_pad);
  r.h_fwd = padded_rows(t.fwd.h, n_pad);
  r.h_bwd = padded_rows(t.bwd.h, n_pad);
  r.mu = padded_rows(t.mu, n_pad);
  r.sigma = padded_rows(t.sigma, n_pad);
  r.z = padded_rows(t.z, n_pad);
  return r;
}

std::size_t real_rows(const Eigen::VectorXd& mask) {
  std::size_t n = 0;
  while (n < static_cast<std::size_t>(mask.size()) && mask(static_cast<Eigen::Index>(n)) != 0.0) ++n;
  for (Eigen::Index i = static_cast<Eigen::Index>(n); i < mask.size(); ++i) {
    if (mask(i) != 0.0) throw Error(ErrorKind::ShapeMismatch, "mask must be a prefix of ones");
  }
  return n;
}

}  // namespace

Eigen::MatrixXd embed(const Eigen::VectorXi& types, const Eigen::VectorXd& mask,
                      const Eigen::MatrixXd& embedding) {
  if (types.size() != mask.size()) throw Error(ErrorKind::ShapeMismatch, "types and mask differ in length");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(types.size(), embedding.cols());
  for (Eigen::Index i = 0; i < types.size(); ++i) {
    const int t = types(i);
    if (t < 0 || t >= embedding.rows()) {
      throw Error(ErrorKind::InvalidArgument, "node type index " + std::to_string(t) + " out of range");
    }
    out.row(i) = mask(i) * embedding.row(t);
  }
  return out;
}

Eigen::MatrixXd dagrnn_direction(const Eigen::MatrixXd& x_prime, const Eigen::MatrixXd& adjacency,
                                 const Eigen::VectorXd& mask, const GruParams& gru,
                                 Direction direction) {
  const std::size_t n = real_rows(mask);
  if (x_prime.rows() != mask.size() || adjacency.rows() != mask.size() ||
      adjacency.cols() != mask.size()) {
    throw Error(ErrorKind::ShapeMismatch, "dagrnn_direction: inconsistent row counts");
  }
  const auto preds = detail::predecessor_lists(adjacency, n, direction);
  const Eigen::MatrixXd x = x_prime.topRows(static_cast<Eigen::Index>(n)).transpose();
  const auto trace = detail::gru_forward(x, preds, gru, direction);
  return padded_rows(trace.h, static_cast<std::size_t>(mask.size()));
}

EncodeResult encode(const GraphTensors& tensors, const ModelParams& params,
                    const Eigen::MatrixXd& eps) {
  return to_result(detail::encoder_forward(tensors, params, &eps), tensors.n_pad);
}

EncodeResult encode(const GraphTensors& tensors, const ModelParams& params, Rng& rng) {
  const Eigen::MatrixXd eps = standard_normal(static_cast<Eigen::Index>(tensors.n_pad),
                                              params.mlp_mu.back().bias.size(), rng);
  return encode(tensors, params, eps);
}

EncodeResult encode_mean(const GraphTensors& tensors, const ModelParams& params) {
  return to_result(detail::encoder_forward(tensors, params, nullptr), tensors.n_pad);
}

Eigen::MatrixXd decode(const Eigen::MatrixXd& z, const Eigen::MatrixXd& h, const ModelParams& params) {
  detail::PairList pairs;
  pairs.reserve(static_cast<std::size_t>(z.rows() * h.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.rows(); ++j) pairs.emplace_back(i, j);
  }
  if (pairs.empty()) return Eigen::MatrixXd(z.rows(), h.rows());
  const auto trace =
      detail::decoder_forward(z.transpose(), h.transpose(), pairs, params.decoder);
  Eigen::MatrixXd out(z.rows(), h.rows());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out(pairs[k].first, pairs[k].second) = sigmoid(trace.logits(static_cast<Eigen::Index>(k)));
  }
  return out;
}

Eigen::MatrixXd reconstruct(const GraphTensors& tensors, const EncodeResult& encoded,
                            const ModelParams& params) {
  const auto pad = static_cast<Eigen::Index>(tensors.n_pad);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pad, pad);
  if (tensors.n < 2) return out;
  const auto n = static_cast<Eigen::Index>(tensors.n);
  const auto pairs = detail::lower_triangle_pairs(tensors.n);
  const auto trace = detail::decoder_forward(encoded.z.topRows(n).transpose(),
                                             encoded.h.topRows(n).transpose(), pairs, params.decoder);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out(pairs[k].first, pairs[k].second) = sigmoid(trace.logits(static_cast<Eigen::Index>(k)));
  }
  return out;
}

}  // namespace honeygraph
