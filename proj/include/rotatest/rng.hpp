#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace rotatest {

using Stream = std::mt19937_64;

// Independent stream keyed by (master seed, keys...). The same key tuple
// always yields the same stream, whatever thread constructs it.
inline Stream make_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * keys.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return Stream(seq);
}

// FNV-1a, used to key streams by model name.
inline std::uint64_t name_key(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rotatest
