#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace wit {

using Rng = std::mt19937_64;

// Stream tags keep the substreams of different consumers apart.
enum class Stream : std::uint64_t {
  kScene = 1,
  kSnapshot = 2,
  kSample = 3,
  kSplit = 4,
  kInit = 5,
  kShuffle = 6,
  kDropout = 7,
};

/// Independent generator for (seed, stream, indices...). Same inputs give the
/// same sequence on every run.
inline Rng substream(std::uint64_t seed, Stream stream,
                     std::initializer_list<std::uint64_t> indices = {}) {
  std::vector<std::uint32_t> words;
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  push(static_cast<std::uint64_t>(stream));
  for (auto i : indices) push(i);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace wit
