#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "honeygraph/graph.hpp"
#include "honeygraph/random.hpp"

namespace honeygraph {

/// Parameters of the synthetic AD generator. Proportions are fractions of all
/// nodes in a graph, indexed by type_index(); the Domain share stands for the
/// single root every graph carries.
struct DatasetSpec {
  std::size_t graph_size = 15;
  std::size_t n_samples = 2000;
  double node_count_mean = 12.51;
  double node_count_std = 0.75;
  double edge_count_mean = 19.02;
  double edge_count_std = 3.0;
  std::array<double, kNodeTypeCount> type_proportions{};
  std::uint64_t seed = 0;
  double validation_fraction = 0.125;  // of the train+validation share

  /// Throws Error(InvalidArgument) when an invariant is broken.
  void validate() const;
};

/// Default proportions: one Domain node, OU 10%, Group 15%, Computer 15%,
/// User the remainder.
std::array<double, kNodeTypeCount> default_type_proportions(std::size_t graph_size);

/// Presets for the four dataset sizes (15, 50, 150, 500). Node and edge count
/// laws are calibrated to the reference dataset means.
DatasetSpec preset_spec(std::size_t graph_size, std::size_t n_samples, std::uint64_t seed);

/// Directed 2D grids with a single node type: edges go right and down.
/// Rows and columns are drawn uniformly from [min_side, max_side].
struct GridSpec {
  std::size_t n_samples = 500;
  std::size_t min_side = 5;
  std::size_t max_side = 9;
  std::uint64_t seed = 0;
  double validation_fraction = 0.125;
};

enum class Split { Train, Validation, Test };

std::string_view to_string(Split s) noexcept;
Split parse_split(std::string_view s);

struct Dataset {
  std::vector<ADGraph> graphs;
  DatasetSpec spec;
  std::vector<Split> splits;
  std::string kind = "ad";  // "ad" or "grid"

  std::vector<std::size_t> indices(Split s) const;
  std::size_t max_node_count() const;
};

/// Layered construction: Domain root, OU tree, Groups under Domain/OUs,
/// Computers and Users under OUs (Groups when no OU exists), then extra valid
/// edges drawn uniformly until the sampled edge count is reached.
ADGraph generate_graph(const DatasetSpec& spec, Rng& rng);

ADGraph generate_grid_graph(std::size_t rows, std::size_t cols);

DatasetSpec estimate_spec(const std::vector<ADGraph>& samples);

/// Generates, shuffles and labels: 4/5 train+validation, 1/5 test, and
/// `validation_fraction` of the first share as validation.
Dataset generate_dataset(const DatasetSpec& spec);
Dataset generate_grid_dataset(const GridSpec& spec);

/// Split sizes for a dataset of n graphs: {train, validation, test}.
std::array<std::size_t, 3> split_sizes(std::size_t n, double validation_fraction);

/// Directory of graph_NNNNN.json files plus manifest.json.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir, bool overwrite);
Dataset load_dataset(const std::filesystem::path& dir);

struct DatasetStats {
  double mean_nodes = 0.0;
  double mean_edges = 0.0;
};
DatasetStats dataset_stats(const std::vector<ADGraph>& graphs);

}  // namespace honeygraph
