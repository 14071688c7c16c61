#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "honeygraph/model.hpp"

namespace honeygraph {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
  std::size_t n_pad = 0;
};

/// JSON archive: {"format_version", "config", "n_pad", "params": {key: {"rows",
/// "cols", "data"}}} with keys from ModelParams::visit.
std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(std::string_view text);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace honeygraph
