#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace quadsim {

/// Name written into every manifest so other implementations can replay runs.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

/// Seedable generator with a portable uniform draw.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// built directly from the top 53 bits of the engine output. Together with
/// the standard-specified mt19937_64 sequence this makes every draw
/// reproducible across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent sub-stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-streams of one master seed. Deployment and protocol draws never share
/// a stream, so two protocols run on the same seed see the same placement.
enum class Stream : std::uint64_t { kDeployment = 1, kProtocol = 2 };

constexpr std::uint64_t stream_seed(std::uint64_t master, Stream s) {
  return mix_seed(master ^ mix_seed(static_cast<std::uint64_t>(s)));
}

}  // namespace quadsim
