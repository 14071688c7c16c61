#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace honeygraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct DatasetArgs {
  std::string kind = "ad";
  std::size_t size = 15;
  std::size_t count = 2000;
  std::uint64_t seed = 0;
  std::size_t min_side = 5;
  std::size_t max_side = 9;
  double validation_fraction = 0.125;
  std::filesystem::path out;
  bool force = false;
};

struct TrainArgs {
  std::filesystem::path data;
  std::filesystem::path out;
  std::optional<std::filesystem::path> history;
  std::optional<std::filesystem::path> resume;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  std::optional<double> decay_rate;
  std::optional<std::size_t> decay_steps;
  std::optional<std::size_t> batch_size;
  std::optional<double> kl_weight;
  std::optional<double> focal_alpha;
  std::optional<double> focal_gamma;
  std::optional<double> threshold;
  std::optional<std::string> sampling;
  std::optional<std::size_t> latent_dim;
  std::optional<std::size_t> gru_units;
  bool quiet = false;
  bool force = false;
};

struct ExtendArgs {
  std::filesystem::path model;
  std::filesystem::path graph;
  std::size_t users = 5;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::optional<double> threshold;
  std::optional<std::string> sampling;
  bool force = false;
};

struct EvaluateArgs {
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> data;
  std::string split = "test";
  std::optional<std::size_t> limit;
  std::size_t users = 5;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> original;
  std::optional<std::filesystem::path> extended;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> pr_curve;
  bool force = false;
};

int cmd_dataset(const DatasetArgs& args, std::ostream& out);
int cmd_train(const TrainArgs& args, std::ostream& out);
int cmd_extend(const ExtendArgs& args, std::ostream& out);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out);

/// Parses argv, dispatches to a command and maps failures to exit codes:
/// 0 success, 1 runtime error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace honeygraph::cli
