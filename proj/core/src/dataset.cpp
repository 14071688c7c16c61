#include "honeygraph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "honeygraph/error.hpp"
#include "honeygraph/graph_io.hpp"

namespace honeygraph {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMinNodes = 5;

std::size_t min_nodes(std::size_t graph_size) { return std::min(kMinNodes, graph_size); }

std::string pad_id(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "v" + digits;
}

std::size_t sample_node_count(const DatasetSpec& spec, Rng& rng) {
  std::normal_distribution<double> dist(spec.node_count_mean, spec.node_count_std);
  const double draw = spec.node_count_std > 0.0 ? dist(rng) : spec.node_count_mean;
  const auto lo = static_cast<double>(min_nodes(spec.graph_size));
  const auto hi = static_cast<double>(spec.graph_size);
  return static_cast<std::size_t>(std::clamp(std::round(draw), lo, hi));
}

std::size_t sample_edge_count(const DatasetSpec& spec, std::size_t lo, std::size_t hi, Rng& rng) {
  if (spec.edge_count_std <= 0.0) {
    return static_cast<std::size_t>(std::clamp(std::round(spec.edge_count_mean),
                                               static_cast<double>(lo), static_cast<double>(hi)));
  }
  std::normal_distribution<double> dist(spec.edge_count_mean, spec.edge_count_std);
  double draw = 0.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    draw = std::round(dist(rng));
    if (draw >= static_cast<double>(lo) && draw <= static_cast<double>(hi)) break;
  }
  return static_cast<std::size_t>(
      std::clamp(draw, static_cast<double>(lo), static_cast<double>(hi)));
}

// Counts for OU, Group, Computer, User among the n - 1 non-root nodes.
struct TypeCounts {
  std::size_t ou = 0, group = 0, computer = 0, user = 0;
};

TypeCounts sample_type_counts(const DatasetSpec& spec, std::size_t n, Rng& rng) {
  const auto& p = spec.type_proportions;
  const double w_ou = p[type_index(NodeType::OrganizationalUnit)];
  const double w_group = p[type_index(NodeType::Group)];
  const double w_comp = p[type_index(NodeType::Computer)];
  const double w_user = p[type_index(NodeType::User)];
  const double total = w_ou + w_group + w_comp + w_user;

  TypeCounts c;
  std::size_t remaining = n - 1;
  double mass = total;
  // Sequential binomials give a multinomial draw.
  auto take = [&](double w) -> std::size_t {
    if (remaining == 0 || mass <= 0.0) return 0;
    const double q = std::clamp(w / mass, 0.0, 1.0);
    std::binomial_distribution<std::size_t> b(remaining, q);
    const std::size_t k = b(rng);
    remaining -= k;
    mass -= w;
    return k;
  };
  c.ou = take(w_ou);
  c.group = take(w_group);
  c.computer = take(w_comp);
  c.user = remaining;

  if (c.ou + c.group == 0 && c.computer + c.user > 0) {
    if (w_ou <= 0.0 && w_group <= 0.0) {
      throw Error(ErrorKind::Infeasible,
                  "type proportions leave no OU or Group to hold users and computers");
    }
    // Promote one leaf so the leaves have a container.
    if (c.user > 0) {
      --c.user;
    } else {
      --c.computer;
    }
    if (w_ou > 0.0) {
      c.ou = 1;
    } else {
      c.group = 1;
    }
  }
  return c;
}

template <class T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
  return items[d(rng)];
}

}  // namespace

void DatasetSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, "dataset spec: " + m); };
  if (n_samples < 1) fail("n_samples must be at least 1");
  if (graph_size < 2) fail("graph_size must be at least 2");
  if (!(edge_count_std >= 0.0)) fail("edge_count_std must be non-negative");
  if (!(node_count_std >= 0.0)) fail("node_count_std must be non-negative");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction must lie in [0, 1)");
  }
  double sum = 0.0;
  for (double q : type_proportions) {
    if (!(q >= 0.0 && q <= 1.0)) fail("type proportions must lie in [0, 1]");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-6) fail("type proportions must sum to 1");
  if (type_proportions[type_index(NodeType::Domain)] <= 0.0) {
    fail("type proportions must reserve mass for the Domain root");
  }
}

std::array<double, kNodeTypeCount> default_type_proportions(std::size_t graph_size) {
  std::array<double, kNodeTypeCount> p{};
  const double domain = 1.0 / static_cast<double>(std::max<std::size_t>(graph_size, 2));
  p[type_index(NodeType::Domain)] = domain;
  p[type_index(NodeType::OrganizationalUnit)] = 0.10;
  p[type_index(NodeType::Group)] = 0.15;
  p[type_index(NodeType::Computer)] = 0.15;
  p[type_index(NodeType::User)] = 1.0 - domain - 0.40;
  return p;
}

DatasetSpec preset_spec(std::size_t graph_size, std::size_t n_samples, std::uint64_t seed) {
  DatasetSpec s;
  s.graph_size = graph_size;
  s.n_samples = n_samples;
  s.seed = seed;
  s.type_proportions = default_type_proportions(graph_size);
  const double size = static_cast<double>(graph_size);
  switch (graph_size) {
    case 15:
      s.node_count_mean = 12.51;
      // Above the target mean: small graphs often run out of valid candidates,
      // which clips the draw. Realised mean is about 19.0.
      s.edge_count_mean = 20.6;
      s.edge_count_std = 3.0;
      break;
    case 50:
      s.node_count_mean = 39.88;
      s.edge_count_mean = 65.49;
      s.edge_count_std = 8.0;
      break;
    case 150:
      s.node_count_mean = 115.11;
      s.edge_count_mean = 192.49;
      s.edge_count_std = 20.0;
      break;
    case 500:
      s.node_count_mean = 353.36;
      s.edge_count_mean = 600.17;
      s.edge_count_std = 60.0;
      break;
    default:
      s.node_count_mean = 0.8 * size;
      s.edge_count_mean = 1.6 * s.node_count_mean;
      s.edge_count_std = 0.15 * s.edge_count_mean;
      break;
  }
  s.node_count_std = 0.05 * size;
  return s;
}

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "validation") return Split::Validation;
  if (s == "test") return Split::Test;
  throw Error(ErrorKind::MalformedInput, "unknown split label '" + std::string(s) + "'");
}

std::vector<std::size_t> Dataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == s) out.push_back(i);
  }
  return out;
}

std::size_t Dataset::max_node_count() const {
  std::size_t m = 0;
  for (const auto& g : graphs) m = std::max(m, g.node_count());
  return m;
}

ADGraph generate_graph(const DatasetSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = sample_node_count(spec, rng);
  const TypeCounts counts = sample_type_counts(spec, n, rng);

  // Creation order is a topological order: root, OUs, Groups, Computers, Users.
  std::vector<NodeType> types;
  types.reserve(n);
  types.push_back(NodeType::Domain);
  types.insert(types.end(), counts.ou, NodeType::OrganizationalUnit);
  types.insert(types.end(), counts.group, NodeType::Group);
  types.insert(types.end(), counts.computer, NodeType::Computer);
  types.insert(types.end(), counts.user, NodeType::User);

  std::vector<std::size_t> ous, groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (types[i] == NodeType::OrganizationalUnit) ous.push_back(i);
    if (types[i] == NodeType::Group) groups.push_back(i);
  }

  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  std::vector<std::pair<std::size_t, std::size_t>> tree;
  auto add_tree = [&](std::size_t parent, std::size_t child) {
    has[parent][child] = 1;
    tree.emplace_back(parent, child);
  };

  for (std::size_t k = 0; k < ous.size(); ++k) {
    std::vector<std::size_t> parents{0};
    parents.insert(parents.end(), ous.begin(), ous.begin() + static_cast<std::ptrdiff_t>(k));
    add_tree(pick(parents, rng), ous[k]);
  }
  std::vector<std::size_t> group_parents{0};
  group_parents.insert(group_parents.end(), ous.begin(), ous.end());
  for (std::size_t g : groups) add_tree(pick(group_parents, rng), g);

  const std::vector<std::size_t>& leaf_parents = ous.empty() ? groups : ous;
  for (std::size_t i = 0; i < n; ++i) {
    if (types[i] == NodeType::User || types[i] == NodeType::Computer) {
      add_tree(pick(leaf_parents, rng), i);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!has[u][v] && is_valid_edge(types[u], types[v])) candidates.emplace_back(u, v);
    }
  }

  const std::size_t lo = n - 1;
  const std::size_t hi = std::min(n * (n - 1) / 2, lo + candidates.size());
  const std::size_t target = sample_edge_count(spec, lo, hi, rng);
  std::size_t extra = target - lo;
  // Partial Fisher-Yates: first `extra` candidates become edges.
  for (std::size_t i = 0; i < extra; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[d(rng)]);
  }

  // Node ids are a random permutation so id order carries no type information.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t width = std::to_string(spec.graph_size - 1).size();

  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = pad_id(perm[i], width);
    std::string name;
    switch (types[i]) {
      case NodeType::Domain: name = "corp.local"; break;
      case NodeType::OrganizationalUnit: name = "OU-" + id; break;
      case NodeType::Group: name = "Group-" + id; break;
      case NodeType::Computer: name = "WKS-" + id; break;
      case NodeType::User: name = "user-" + id; break;
    }
    nodes.push_back(Node{id, types[i], {{"name", name}}});
  }
  std::vector<Edge> edges;
  edges.reserve(target);
  for (auto [u, v] : tree) edges.push_back(Edge{nodes[u].id, nodes[v].id});
  for (std::size_t i = 0; i < extra; ++i) {
    auto [u, v] = candidates[i];
    edges.push_back(Edge{nodes[u].id, nodes[v].id});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end());
  return ADGraph(std::move(nodes), std::move(edges));
}

ADGraph generate_grid_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error(ErrorKind::InvalidArgument, "grid needs rows and cols");
  auto id = [](std::size_t r, std::size_t c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "r%02zuc%02zu", r, c);
    return std::string(buf);
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      nodes.push_back(Node{id(r, c), NodeType::Group, {}});
      if (c + 1 < cols) edges.push_back(Edge{id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back(Edge{id(r, c), id(r + 1, c)});
    }
  }
  return ADGraph(std::move(nodes), std::move(edges));
}

DatasetSpec estimate_spec(const std::vector<ADGraph>& samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::InsufficientSamples, "estimate_spec needs at least two graphs");
  }
  const double count = static_cast<double>(samples.size());
  double sum_n = 0, sum_n2 = 0, sum_e = 0, sum_e2 = 0;
  std::array<double, kNodeTypeCount> type_totals{};
  double total_nodes = 0;
  std::size_t max_n = 0;
  for (const auto& g : samples) {
    const double nv = static_cast<double>(g.node_count());
    const double ne = static_cast<double>(g.edge_count());
    sum_n += nv;
    sum_n2 += nv * nv;
    sum_e += ne;
    sum_e2 += ne * ne;
    total_nodes += nv;
    max_n = std::max(max_n, g.node_count());
    for (const Node& node : g.nodes()) type_totals[type_index(node.type)] += 1.0;
  }
  DatasetSpec s;
  s.n_samples = samples.size();
  s.node_count_mean = sum_n / count;
  s.node_count_std = std::sqrt(std::max(0.0, sum_n2 / count - s.node_count_mean * s.node_count_mean));
  s.edge_count_mean = sum_e / count;
  s.edge_count_std = std::sqrt(std::max(0.0, sum_e2 / count - s.edge_count_mean * s.edge_count_mean));
  s.graph_size = std::max<std::size_t>(2, static_cast<std::size_t>(std::round(s.node_count_mean)));
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) s.type_proportions[t] = type_totals[t] / total_nodes;
  s.seed = 0;
  return s;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, double validation_fraction) {
  const auto train_val = static_cast<std::size_t>(std::round(0.8 * static_cast<double>(n)));
  const auto val = static_cast<std::size_t>(
      std::round(validation_fraction * static_cast<double>(train_val)));
  return {train_val - val, val, n - train_val};
}

namespace {

void assign_splits(Dataset& d, std::uint64_t seed, double validation_fraction) {
  const std::size_t n = d.graphs.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng shuffle_rng = make_rng(seed, {0x5f11u});
  std::shuffle(perm.begin(), perm.end(), shuffle_rng);

  std::vector<ADGraph> shuffled;
  shuffled.reserve(n);
  for (std::size_t i : perm) shuffled.push_back(std::move(d.graphs[i]));
  d.graphs = std::move(shuffled);

  const auto [train, val, test] = split_sizes(n, validation_fraction);
  d.splits.assign(n, Split::Test);
  for (std::size_t i = 0; i < train; ++i) d.splits[i] = Split::Train;
  for (std::size_t i = train; i < train + val; ++i) d.splits[i] = Split::Validation;
  (void)test;
}

}  // namespace

Dataset generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  Dataset d;
  d.spec = spec;
  d.graphs.reserve(spec.n_samples);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    Rng rng = make_rng(spec.seed, {i});
    d.graphs.push_back(generate_graph(spec, rng));
  }
  assign_splits(d, spec.seed, spec.validation_fraction);
  return d;
}

Dataset generate_grid_dataset(const GridSpec& spec) {
  if (spec.n_samples < 1 || spec.min_side < 1 || spec.max_side < spec.min_side) {
    throw Error(ErrorKind::InvalidArgument, "grid spec: need n_samples >= 1 and 1 <= min_side <= max_side");
  }
  Dataset d;
  d.kind = "grid";
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    Rng rng = make_rng(spec.seed, {i});
    std::uniform_int_distribution<std::size_t> side(spec.min_side, spec.max_side);
    const std::size_t rows = side(rng);
    const std::size_t cols = side(rng);
    d.graphs.push_back(generate_grid_graph(rows, cols));
  }
  d.spec = estimate_spec(d.graphs.size() >= 2 ? d.graphs
                                               : std::vector<ADGraph>{d.graphs[0], d.graphs[0]});
  d.spec.graph_size = spec.max_side * spec.max_side;
  d.spec.n_samples = spec.n_samples;
  d.spec.seed = spec.seed;
  d.spec.validation_fraction = spec.validation_fraction;
  assign_splits(d, spec.seed, spec.validation_fraction);
  return d;
}

DatasetStats dataset_stats(const std::vector<ADGraph>& graphs) {
  DatasetStats s;
  if (graphs.empty()) return s;
  for (const auto& g : graphs) {
    s.mean_nodes += static_cast<double>(g.node_count());
    s.mean_edges += static_cast<double>(g.edge_count());
  }
  s.mean_nodes /= static_cast<double>(graphs.size());
  s.mean_edges /= static_cast<double>(graphs.size());
  return s;
}

namespace {

ordered_json spec_to_json(const DatasetSpec& s) {
  ordered_json props = ordered_json::object();
  for (NodeType t : kAllNodeTypes) props[std::string(to_string(t))] = s.type_proportions[type_index(t)];
  return ordered_json{{"graph_size", s.graph_size},
                      {"n_samples", s.n_samples},
                      {"node_count_mean", s.node_count_mean},
                      {"node_count_std", s.node_count_std},
                      {"edge_count_mean", s.edge_count_mean},
                      {"edge_count_std", s.edge_count_std},
                      {"type_proportions", props},
                      {"seed", s.seed},
                      {"validation_fraction", s.validation_fraction}};
}

DatasetSpec spec_from_json(const nlohmann::json& j) {
  DatasetSpec s;
  s.graph_size = j.at("graph_size").get<std::size_t>();
  s.n_samples = j.at("n_samples").get<std::size_t>();
  s.node_count_mean = j.at("node_count_mean").get<double>();
  s.node_count_std = j.at("node_count_std").get<double>();
  s.edge_count_mean = j.at("edge_count_mean").get<double>();
  s.edge_count_std = j.at("edge_count_std").get<double>();
  for (NodeType t : kAllNodeTypes) {
    s.type_proportions[type_index(t)] = j.at("type_proportions").at(std::string(to_string(t))).get<double>();
  }
  s.seed = j.at("seed").get<std::uint64_t>();
  s.validation_fraction = j.at("validation_fraction").get<double>();
  return s;
}

std::string graph_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "graph_%05zu.json", i);
  return buf;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::filesystem::path& dir, bool overwrite) {
  namespace fs = std::filesystem;
  if (fs::exists(dir / "manifest.json") && !overwrite) {
    throw Error(ErrorKind::Io, dir.string() + " already holds a dataset (use --force to overwrite)");
  }
  fs::create_directories(dir);

  ordered_json graphs = ordered_json::array();
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    const std::string file = graph_file_name(i);
    write_text_file(dir / file, to_native_json(dataset.graphs[i]));
    graphs.push_back(ordered_json{{"file", file}, {"split", to_string(dataset.splits.at(i))}});
  }
  const DatasetStats stats = dataset_stats(dataset.graphs);
  const auto sizes = split_sizes(dataset.graphs.size(), dataset.spec.validation_fraction);
  ordered_json manifest{
      {"format_version", 1},
      {"kind", dataset.kind},
      {"seed", dataset.spec.seed},
      {"spec", spec_to_json(dataset.spec)},
      {"stats", {{"graphs", dataset.graphs.size()},
                 {"mean_nodes", stats.mean_nodes},
                 {"mean_edges", stats.mean_edges},
                 {"max_nodes", dataset.max_node_count()}}},
      {"split_counts", {{"train", sizes[0]}, {"validation", sizes[1]}, {"test", sizes[2]}}},
      {"graphs", graphs}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const std::string text = read_text_file(dir / "manifest.json");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, std::string("manifest: ") + e.what());
  }
  Dataset d;
  try {
    d.kind = manifest.value("kind", std::string("ad"));
    d.spec = spec_from_json(manifest.at("spec"));
    for (const auto& entry : manifest.at("graphs")) {
      d.graphs.push_back(from_native_json(read_text_file(dir / entry.at("file").get<std::string>())));
      d.splits.push_back(parse_split(entry.at("split").get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("manifest: ") + e.what());
  }
  return d;
}

}  // namespace honeygraph
