#pragma once

#include <cstdint>
#include <random>

namespace rftwin {

using RandomStream = std::mt19937_64;

/// Purpose tag mixed into a sub-stream seed so that train samples, test
/// samples and auxiliary draws never share a stream.
enum class StreamPhase : std::uint64_t {
  Train = 1,
  Test = 2,
  RadioMap = 3,
  Synthetic = 4,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the stream of one (master seed, phase, sample index) triple.
std::uint64_t substream_seed(std::uint64_t master_seed, StreamPhase phase, std::uint64_t index) noexcept;

RandomStream make_substream(std::uint64_t master_seed, StreamPhase phase, std::uint64_t index);

/// Standard normal draw; callers scale it so that a zero standard deviation
/// consumes the same number of draws as any other.
double standard_normal(RandomStream& rng);

double uniform(RandomStream& rng, double lo, double hi);

}  // namespace rftwin
