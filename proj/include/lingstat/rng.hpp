#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace lingstat::rng {

// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Deterministic 64-bit key for a named stage of a run ("between.perm", ...).
std::uint64_t derive_key(std::uint64_t seed, std::string_view stage);

// Counter-based random stream. Stream (key, replicate) is fully determined by
// its two arguments, so replicates can be generated in any order or in parallel.
class Stream {
 public:
  using result_type = std::uint32_t;

  Stream(std::uint64_t key, std::uint64_t replicate);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t replicate_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

// Fisher-Yates shuffle driven by the stream (portable, unlike std::shuffle).
template <typename T>
void shuffle(std::span<T> values, Stream& stream) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace lingstat::rng
