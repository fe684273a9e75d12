#include "rftwin/random.hpp"

namespace rftwin {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, StreamPhase phase, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ static_cast<std::uint64_t>(phase));
  return mix64(h ^ index);
}

RandomStream make_substream(std::uint64_t master_seed, StreamPhase phase, std::uint64_t index) {
  return RandomStream(substream_seed(master_seed, phase, index));
}

double standard_normal(RandomStream& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform(RandomStream& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace rftwin
