#pragma once

// Counter-based random numbers. Every consumer owns an explicit
// (seed, stream) pair, so draws for record i never depend on how many draws
// were made for records 0..i-1 or on which thread produced them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>

namespace qst {

/// Identifies the generator and stream-splitting scheme; written into every
/// dataset sidecar. Bump when the mapping (seed, stream) -> values changes.
inline constexpr std::string_view kRngVersion = "philox4x32-10/v1";

/// Philox4x32 with 10 rounds (Salmon et al. 2011, Random123 reference constants).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Mixes a seed with a list of tags into a new 64-bit seed (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  /// +1 or -1 with probability 1/2.
  int rademacher();
  /// Standard normal (Box-Muller).
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  std::size_t used_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace qst
