#pragma once

#include <string>
#include <vector>

#include <honeygraph/honeygraph.hpp>

namespace fixtures {

using namespace honeygraph;

inline Node node(std::string id, NodeType t, Attributes a = {}) { return Node{std::move(id), t, std::move(a)}; }

inline ADGraph chain3() {
  return ADGraph({node("a", NodeType::Group), node("b", NodeType::Group), node("c", NodeType::User)},
                 {{"a", "b"}, {"b", "c"}});
}

// a -> b, a -> c, b -> d, c -> d
inline ADGraph diamond() {
  return ADGraph({node("d", NodeType::User), node("c", NodeType::Group), node("b", NodeType::Group),
                  node("a", NodeType::OrganizationalUnit)},
                 {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}

// Small domain: corp.local / Staff / {Sales, Eng groups, two users, a computer}.
inline ADGraph small_domain() {
  return ADGraph(
      {node("dom", NodeType::Domain, {{"name", "corp.local"}}),
       node("ou_staff", NodeType::OrganizationalUnit, {{"name", "Staff"}}),
       node("ou_it", NodeType::OrganizationalUnit, {{"name", "IT"}}),
       node("g_sales", NodeType::Group, {{"name", "Sales"}}),
       node("g_eng", NodeType::Group, {{"name", "Engineering"}}),
       node("u_jane", NodeType::User, {{"name", "JANE.DOE@CORP.LOCAL"}, {"samaccountname", "jdoe"}}),
       node("u_bob", NodeType::User, {{"name", "Bob Stone"}}),
       node("pc1", NodeType::Computer, {{"name", "PC1"}})},
      {{"dom", "ou_staff"},
       {"ou_staff", "ou_it"},
       {"ou_staff", "g_sales"},
       {"dom", "g_eng"},
       {"ou_staff", "u_jane"},
       {"g_sales", "u_jane"},
       {"ou_it", "u_bob"},
       {"g_eng", "u_bob"},
       {"ou_it", "pc1"}});
}

// Random DAG over indices: edge j -> i with probability p for j < i, ids shuffled
// so that topological order differs from creation order.
inline ADGraph random_dag(std::size_t n, double p, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> ty(0, 4);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(node("n" + std::to_string((i * 7 + 3) % 97), static_cast<NodeType>(ty(rng))));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (u(rng) < p) edges.push_back({nodes[j].id, nodes[i].id});
    }
  }
  return ADGraph(std::move(nodes), std::move(edges));
}

inline ModelConfig tiny_config(std::size_t units = 3, std::size_t latent = 2) {
  ModelConfig c;
  c.embed_dim = 3;
  c.gru_units = units;
  c.musigma_hidden = 4;
  c.latent_dim = latent;
  c.decoder_hidden = {5, 4, 3};
  return c;
}

// Initialised params with every weight (including the zero-initialised ones)
// perturbed so that no gradient path is trivially zero.
inline ModelParams random_params(const ModelConfig& c, std::uint64_t seed, double scale = 0.5) {
  Rng rng = make_rng(seed);
  ModelParams p = ModelParams::initialize(c, rng);
  std::uniform_real_distribution<double> u(-scale, scale);
  p.visit([&](const std::string&, auto& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = u(rng);
  });
  return p;
}

}  // namespace fixtures
