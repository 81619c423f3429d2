// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ecsim/errors.h"
#include "ecsim/placement.h"

using namespace ecsim;

TEST(object_of, examples)
{
  constexpr std::uint64_t MiB = 1ull << 20;
  auto a = object_of(0, 4 * MiB);
  EXPECT_EQ(a.object.index, 0u);
  EXPECT_EQ(a.intra_offset, 0u);
  auto b = object_of(4 * MiB, 4 * MiB);
  EXPECT_EQ(b.object.index, 1u);
  EXPECT_EQ(b.intra_offset, 0u);
  auto c = object_of(6 * MiB + 512, 4 * MiB);
  EXPECT_EQ(c.object.index, 1u);
  EXPECT_EQ(c.intra_offset, 2 * MiB + 512);
  EXPECT_THROW(object_of(1, 0), config_error);
}

TEST(pg_of, trivial)
{
  for (std::uint64_t i = 0; i < 100; ++i)
    EXPECT_EQ(pg_of({0, i}, 1).value, 0u);
  EXPECT_EQ(pg_of({0, 12345}, 256, 9), pg_of({0, 12345}, 256, 9));
}

TEST(pg_of, balance_over_consecutive_objects)
{
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    std::map<std::uint32_t, std::size_t> counts;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const auto pg = pg_of({0, i}, 256, seed).value;
      ASSERT_LT(pg, 256u);
      ++counts[pg];
    }
    ASSERT_EQ(counts.size(), 256u);
    std::size_t lo = SIZE_MAX, hi = 0;
    for (auto [pg, n] : counts) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    EXPECT_LT(static_cast<double>(hi) / static_cast<double>(lo), 1.5);
  }
}

TEST(pg_of, pools_and_seeds_differ)
{
  std::size_t same_pool = 0, same_seed = 0;
  for (std::uint64_t i = 0; i < 256; ++i) {
    same_pool += pg_of({0, i}, 256) == pg_of({1, i}, 256);
    same_seed += pg_of({0, i}, 256, 0) == pg_of({0, i}, 256, 1);
  }
  EXPECT_LT(same_pool, 256u);
  EXPECT_LT(same_seed, 256u);
}

TEST(osds_of, full_width_is_permutation)
{
  const ClusterMap map;
  for (std::uint32_t pg = 0; pg < 64; ++pg) {
    auto osds = osds_of({pg}, map, map.total_osds());
    std::sort(osds.begin(), osds.end());
    for (std::size_t i = 0; i < osds.size(); ++i)
      ASSERT_EQ(osds[i], i);
  }
}

TEST(osds_of, node_spread)
{
  const ClusterMap map;  // 4 nodes x 6 OSDs
  for (std::uint32_t pg = 0; pg < 256; ++pg) {
    const auto osds = osds_of({pg}, map, 9);
    ASSERT_EQ(osds.size(), 9u);
    ASSERT_EQ(std::set<OsdId>(osds.begin(), osds.end()).size(), 9u);
    std::map<std::size_t, int> per_node;
    for (auto o : osds)
      ++per_node[map.node_of(o)];
    for (auto [node, n] : per_node)
      ASSERT_LE(n, 3);
  }
}

TEST(osds_of, deterministic_and_capacity)
{
  ClusterMap map;
  map.placement_seed = 5;
  EXPECT_EQ(osds_of({17}, map, 6), osds_of({17}, map, 6));
  EXPECT_THROW(osds_of({0}, map, 25), capacity_error);
}

TEST(osds_of, primaries_spread)
{
  const ClusterMap map;
  std::map<OsdId, int> primaries;
  for (std::uint32_t pg = 0; pg < 256; ++pg)
    ++primaries[osds_of({pg}, map, 9).front()];
  EXPECT_EQ(primaries.size(), 24u);
}

TEST(mix64, stable_values)
{
  // splitmix64 finalizer; reference values of the published algorithm.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafull);
  EXPECT_EQ(mix64(1), 0x910a2dec89025cc1ull);
}
