#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <honeygraph/honeygraph.hpp>

namespace oracles {

using namespace honeygraph;

using Vec = std::vector<double>;

// Plain-loop reference implementation, independent of the Eigen code path.
inline Vec matvec(const Eigen::MatrixXd& w, const Vec& x) {
  Vec y(static_cast<std::size_t>(w.rows()), 0.0);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) y[static_cast<std::size_t>(i)] += w(i, j) * x[static_cast<std::size_t>(j)];
  }
  return y;
}

inline double sig(double v) { return 1.0 / (1.0 + std::exp(-v)); }

inline Vec gru_step(const GruParams& g, const Vec& x, const Vec& s) {
  const Vec wx_u = matvec(g.w_update, x), us_u = matvec(g.u_update, s);
  const Vec wx_r = matvec(g.w_reset, x), us_r = matvec(g.u_reset, s);
  Vec u(s.size()), r(s.size()), rs(s.size()), h(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    u[k] = sig(wx_u[k] + us_u[k] + g.b_update(static_cast<Eigen::Index>(k)));
    r[k] = sig(wx_r[k] + us_r[k] + g.b_reset(static_cast<Eigen::Index>(k)));
    rs[k] = r[k] * s[k];
  }
  const Vec wx_c = matvec(g.w_cand, x), us_c = matvec(g.u_cand, rs);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double c = std::tanh(wx_c[k] + us_c[k] + g.b_cand(static_cast<Eigen::Index>(k)));
    h[k] = u[k] * s[k] + (1.0 - u[k]) * c;
  }
  return h;
}

inline Vec embed_row(const ModelParams& p, int type) {
  Vec x(static_cast<std::size_t>(p.embedding.cols()));
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = p.embedding(type, static_cast<Eigen::Index>(k));
  return x;
}

// Naive recursion over the graph itself (not the matrices): the previous state
// of a node is the sum of the states of its predecessors (forward) or
// successors (backward).
inline std::map<std::string, Vec> naive_direction(const ADGraph& g, const GruParams& gru, const ModelParams& p,
                                           bool forward) {
  const std::size_t units = static_cast<std::size_t>(gru.b_update.size());
  std::vector<std::string> order = topological_sort(g);
  if (!forward) std::reverse(order.begin(), order.end());
  std::map<std::string, Vec> h;
  for (const auto& id : order) {
    const std::size_t idx = *g.index_of(id);
    Vec s(units, 0.0);
    const auto& nbrs = forward ? g.predecessors(idx) : g.successors(idx);
    for (std::size_t q : nbrs) {
      const Vec& hq = h.at(g.node(q).id);
      for (std::size_t k = 0; k < units; ++k) s[k] += hq[k];
    }
    h[id] = gru_step(gru, embed_row(p, type_index(g.node(idx).type)), s);
  }
  return h;
}

inline Vec mlp(const std::vector<DenseParams>& layers, Vec x) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Vec y = matvec(layers[l].weight, x);
    for (std::size_t k = 0; k < y.size(); ++k) {
      y[k] += layers[l].bias(static_cast<Eigen::Index>(k));
      if (l + 1 < layers.size()) y[k] = std::max(0.0, y[k]);
    }
    x = std::move(y);
  }
  return x;
}

inline double max_row_diff(const Eigen::MatrixXd& m, std::size_t row, const Vec& v) {
  double d = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) d = std::max(d, std::abs(m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) - v[k]));
  return d;
}

struct GroupError {
  std::string key;
  double rel = 0.0;
};

// Central differences (step 1e-5) for every scalar; one relative error per
// parameter group, measured as ||g_fd - g|| / max(||g_fd|| + ||g||, tiny).
inline std::vector<GroupError> check_gradients(const GraphTensors& t, const ModelParams& p, const ModelConfig& c,
                                        const Eigen::MatrixXd& eps) {
  ModelParams grad = ModelParams::zeros(c);
  loss_and_gradient(t, p, c, eps, &grad);

  std::vector<std::pair<std::string, Eigen::VectorXd>> analytic;
  grad.visit([&](const std::string& key, const auto& m) {
    analytic.emplace_back(key, Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
  });

  std::vector<GroupError> out;
  ModelParams probe = p;
  std::size_t group = 0;
  probe.visit([&](const std::string& key, auto& m) {
    Eigen::VectorXd fd(m.size());
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const double keep = m.data()[k];
      m.data()[k] = keep + 1e-5;
      const double up = loss_and_gradient(t, probe, c, eps, nullptr).total;
      m.data()[k] = keep - 1e-5;
      const double down = loss_and_gradient(t, probe, c, eps, nullptr).total;
      m.data()[k] = keep;
      fd(k) = (up - down) / 2e-5;
    }
    const Eigen::VectorXd& g = analytic[group++].second;
    const double denom = std::max(fd.norm() + g.norm(), 1e-12);
    out.push_back({key, (fd - g).norm() / denom});
  });
  return out;
}

inline ConfusionCounts brute_force(const Eigen::MatrixXd& t, const Eigen::MatrixXd& p, const Eigen::VectorXd& mask) {
  ConfusionCounts c;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (mask(i) == 0.0 || mask(j) == 0.0) continue;
      const bool a = t(i, j) != 0.0, b = p(i, j) != 0.0;
      if (a && b) ++c.tp;
      if (!a && !b) ++c.tn;
      if (!a && b) ++c.fp;
      if (a && !b) ++c.fn;
    }
  }
  return c;
}

inline bool same_counts(const ConfusionCounts& a, const ConfusionCounts& b) {
  return a.tp == b.tp && a.tn == b.tn && a.fp == b.fp && a.fn == b.fn;
}

}  // namespace oracles
