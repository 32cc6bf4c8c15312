#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace gsp {

/// SplitMix64 finaliser. Bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a list of words; used to derive stream keys and
/// rejection-resampling seeds.
constexpr std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w + 0x9e3779b97f4a7c15ULL));
  return h;
}

/// Counter-based generator: the i-th output is mix64(key + (i+1)*gamma), so a
/// stream is fully determined by its key and position and never depends on
/// which thread consumes it. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Independent child stream identified by `stream_id`.
  CounterRng split(std::uint64_t stream_id) const {
    return CounterRng(hash_words({key_, stream_id}));
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream for one (graph, replicate) task of an experiment.
inline CounterRng task_stream(std::uint64_t master_seed, std::uint64_t graph_id,
                              std::uint64_t replicate_id) {
  return CounterRng(hash_words({master_seed, graph_id, replicate_id}));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
template <class Urbg>
double uniform01(Urbg& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection (no modulo bias).
template <class Urbg>
std::uint64_t uniform_below(Urbg& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace gsp
