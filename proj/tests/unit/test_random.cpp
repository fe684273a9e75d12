#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rftwin/random.hpp"

using namespace rftwin;

TEST(Substreams, SameTripleSameStream) {
  auto a = make_substream(11, StreamPhase::Train, 42);
  auto b = make_substream(11, StreamPhase::Train, 42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Substreams, DistinctAcrossPhaseIndexAndSeed) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t master : {1u, 2u, 3u})
    for (auto phase : {StreamPhase::Train, StreamPhase::Test, StreamPhase::RadioMap, StreamPhase::Synthetic})
      for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(substream_seed(master, phase, i));
  EXPECT_EQ(seeds.size(), 3u * 4u * 1000u);
}

TEST(Draws, StandardNormalMoments) {
  auto rng = make_substream(5, StreamPhase::Synthetic, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(s2 / n - mean * mean, 1.0, 0.01);
}

TEST(Draws, UniformStaysInRange) {
  auto rng = make_substream(5, StreamPhase::Synthetic, 1);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform(rng, 0.0, 40.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 40.0);
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 39.99);
}
