#ifndef EAG_RANDOM_HPP
#define EAG_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace eag {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic uniform draws on top of mt19937_64. std::* distributions are
// implementation-defined, so all sampling goes through these helpers.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire multiply-shift; n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

// Worker-count independent stream for one item of a named scope, e.g.
// hash(seed, corpus_id, pair_index).
inline RandomSource derive_rng(std::uint64_t seed, std::string_view scope,
                               std::uint64_t index) {
  std::uint64_t s = splitmix64(seed ^ fnv1a64(scope));
  s = splitmix64(s ^ index);
  return RandomSource(s);
}

}  // namespace eag

#endif  // EAG_RANDOM_HPP
