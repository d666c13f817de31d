#include "cfii/rng.hpp"

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cfii/parallel.hpp"

using cfii::CounterRng;

static_assert(std::uniform_random_bit_generator<CounterRng>);

TEST(CounterRng, Deterministic) {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
}

TEST(CounterRng, SplitStreamsDiffer) {
  const CounterRng root(9);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(root.split(s)());
  EXPECT_EQ(firsts.size(), 1000u);
  EXPECT_EQ(root.split(3)(), root.split(3)());
  EXPECT_EQ(root.counter(), 0u);
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(1);
  double sum = 0.0, sum2 = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum2 / n - 0.25, 1.0 / 12.0, 2e-3);
}

TEST(CounterRng, NormalMoments) {
  CounterRng rng(2);
  double sum = 0.0, sum2 = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 0.02);
}

TEST(ParallelFor, CoversEveryIndexAndPropagatesErrors) {
  std::vector<int> hit(1000, 0);
  cfii::parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(cfii::parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(ParallelFor, WorkerCountFromEnvironment) {
  setenv("CFII_THREADS", "3", 1);
  EXPECT_EQ(cfii::worker_count(), 3u);
  setenv("CFII_THREADS", "garbage", 1);
  EXPECT_GE(cfii::worker_count(), 1u);
  unsetenv("CFII_THREADS");
}
