#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace honeygraph {

using Rng = std::mt19937_64;

/// Mixes a master seed with stream coordinates (epoch, graph index, ...) so
/// independent components draw from non-overlapping streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> stream = {}) {
  return Rng(derive_seed(master, stream));
}

}  // namespace honeygraph
