#include "honeygraph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "honeygraph/error.hpp"

namespace honeygraph {

namespace {

void check_square(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& mask) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols() ||
      a.rows() != mask.size()) {
    throw Error(ErrorKind::ShapeMismatch, "matrices and mask must share one square shape");
  }
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionCounts confusion(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted,
                          const Eigen::VectorXd& mask) {
  check_square(truth, predicted, mask);
  // Strictly-lower masked entries, vectorised as a weighted sum per cell class.
  const Eigen::MatrixXd outer = mask * mask.transpose();
  const Eigen::MatrixXd weight = outer.triangularView<Eigen::StrictlyLower>();
  const Eigen::ArrayXXd t = (truth.array() != 0.0).cast<double>();
  const Eigen::ArrayXXd p = (predicted.array() != 0.0).cast<double>();
  const Eigen::ArrayXXd w = weight.array();

  ConfusionCounts c;
  c.tp = static_cast<std::size_t>(std::lround((w * t * p).sum()));
  c.fn = static_cast<std::size_t>(std::lround((w * t * (1.0 - p)).sum()));
  c.fp = static_cast<std::size_t>(std::lround((w * (1.0 - t) * p).sum()));
  c.tn = static_cast<std::size_t>(std::lround((w * (1.0 - t) * (1.0 - p)).sum()));
  return c;
}

PrecisionRecall prf1(const ConfusionCounts& c) {
  PrecisionRecall r;
  r.precision = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  r.recall = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  r.f1 = safe_ratio(2.0 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

void ScoredEntries::append(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& scores_matrix,
                           const Eigen::VectorXd& mask) {
  check_square(truth, scores_matrix, mask);
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    if (mask(i) == 0.0) continue;
    for (Eigen::Index j = 0; j < i; ++j) {
      if (mask(j) == 0.0) continue;
      scores.push_back(scores_matrix(i, j));
      labels.push_back(truth(i, j) != 0.0 ? 1 : 0);
    }
  }
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::ShapeMismatch, "pr_curve: scores and labels differ in length");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));

  std::vector<PrPoint> curve;
  curve.push_back(PrPoint{idx.empty() ? 1.0 : scores[idx.front()], 0.0, 1.0});
  double tp = 0.0, fp = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (labels[idx[k]] != 0) {
      tp += 1.0;
    } else {
      fp += 1.0;
    }
    // Emit once all entries tied at this score are in.
    if (k + 1 < idx.size() && scores[idx[k + 1]] == scores[idx[k]]) continue;
    curve.push_back(PrPoint{scores[idx[k]], safe_ratio(tp, positives), safe_ratio(tp, tp + fp)});
  }
  return curve;
}

double pr_auc(std::span<const double> scores, std::span<const int> labels) {
  if (std::find(labels.begin(), labels.end(), 1) == labels.end()) return 0.0;
  const auto curve = pr_curve(scores, labels);
  double area = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    area += (curve[k].recall - curve[k - 1].recall) *
            (curve[k].precision + curve[k - 1].precision) / 2.0;
  }
  return std::clamp(area, 0.0, 1.0);
}

double pr_auc(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& scores,
              const Eigen::VectorXd& mask) {
  ScoredEntries e;
  e.append(truth, scores, mask);
  return pr_auc(e.scores, e.labels);
}

EdgeValidity edge_validity_ratio(const ADGraph& extended, const std::vector<std::string>& new_nodes) {
  if (new_nodes.empty()) throw Error(ErrorKind::EmptyInput, "edge_validity_ratio: no new nodes");
  EdgeValidity out;
  for (const std::string& id : new_nodes) {
    const auto idx = extended.index_of(id);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "edge_validity_ratio: unknown node '" + id + "'");
    const auto& preds = extended.predecessors(*idx);
    if (preds.empty()) {
      throw Error(ErrorKind::InvalidArgument, "edge_validity_ratio: node '" + id + "' has no incoming edge");
    }
    const NodeType target = extended.node(*idx).type;
    const auto valid = std::count_if(preds.begin(), preds.end(), [&](std::size_t p) {
      return is_valid_edge(extended.node(p).type, target);
    });
    out.per_node.push_back(static_cast<double>(valid) / static_cast<double>(preds.size()));
  }
  out.evr = std::accumulate(out.per_node.begin(), out.per_node.end(), 0.0) /
            static_cast<double>(out.per_node.size());
  return out;
}

double edge_count_ratio(double delta_in_original, double delta_in_generated) noexcept {
  const double hi = std::max(delta_in_original, delta_in_generated);
  if (hi <= 0.0) return 1.0;
  return std::min(delta_in_original, delta_in_generated) / hi;
}

ExtensionMetrics extension_metrics(const ADGraph& original, const ADGraph& extended,
                                   const std::vector<std::string>& new_nodes) {
  if (new_nodes.empty()) throw Error(ErrorKind::EmptyInput, "extension metrics: no new nodes");
  double user_in = 0.0;
  std::size_t users = 0;
  for (std::size_t i = 0; i < original.node_count(); ++i) {
    if (original.node(i).type != NodeType::User) continue;
    user_in += static_cast<double>(original.in_degree(i));
    ++users;
  }
  if (users == 0) throw Error(ErrorKind::NoUsers, "original graph has no User nodes");

  ExtensionMetrics m;
  m.delta_in_original = user_in / static_cast<double>(users);
  double gen_in = 0.0;
  for (const std::string& id : new_nodes) {
    const auto idx = extended.index_of(id);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "unknown new node '" + id + "'");
    gen_in += static_cast<double>(extended.in_degree(*idx));
  }
  m.delta_in_generated = gen_in / static_cast<double>(new_nodes.size());
  m.mecr = edge_count_ratio(m.delta_in_original, m.delta_in_generated);
  const EdgeValidity v = edge_validity_ratio(extended, new_nodes);
  m.evr = v.evr;
  m.per_node_evr = v.per_node;
  return m;
}

double mean_edge_count_ratio(const ADGraph& original, const ADGraph& extended,
                             const std::vector<std::string>& new_nodes) {
  return extension_metrics(original, extended, new_nodes).mecr;
}

double wasserstein_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyInput, "wasserstein: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
  }
  // Integral of |F_a - F_b| over the merged support.
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double dist = 0.0;
  for (std::size_t k = 0; k + 1 < all.size(); ++k) {
    const double width = all[k + 1] - all[k];
    if (width == 0.0) continue;
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), all[k]) - a.begin()) / na;
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), all[k]) - b.begin()) / nb;
    dist += std::abs(fa - fb) * width;
  }
  return dist;
}

std::vector<double> degree_sample(const ADGraph& graph) {
  std::vector<double> out;
  out.reserve(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) out.push_back(static_cast<double>(graph.degree(i)));
  return out;
}

std::vector<double> degree_sample(const ADGraph& graph, const std::vector<std::string>& ids) {
  std::vector<double> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto idx = graph.index_of(id);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "degree_sample: unknown node '" + id + "'");
    out.push_back(static_cast<double>(graph.degree(*idx)));
  }
  return out;
}

}  // namespace honeygraph
