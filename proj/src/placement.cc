// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/placement.h"

#include <numeric>
#include <random>
#include <string>

#include "ecsim/errors.h"

namespace ecsim {

ObjectLocation object_of(std::uint64_t file_offset, std::uint64_t object_bytes,
                         std::uint64_t pool)
{
  if (object_bytes == 0)
    throw config_error("object_of: object_bytes must be > 0");
  return {ObjectId{pool, file_offset / object_bytes}, file_offset % object_bytes};
}

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

PgId pg_of(const ObjectId& obj, std::size_t pg_count, std::uint64_t seed)
{
  if (pg_count == 0)
    throw config_error("pg_of: pg_count must be >= 1");
  if (pg_count == 1)
    return PgId{0};
  const std::uint64_t h = mix64(mix64(obj.pool) ^ mix64(seed + 0x5bd1e995u));
  const std::uint64_t n = pg_count;
  const std::uint64_t offset = h % n;
  std::uint64_t stride = (mix64(h) % (n - 1)) + 1;
  while (std::gcd(stride, n) != 1)
    stride = stride % (n - 1) + 1;
  // (offset + index * stride) mod n without overflow
  const std::uint64_t step = ((obj.index % n) * stride) % n;
  return PgId{static_cast<std::uint32_t>((offset + step) % n)};
}

namespace {

// Fisher-Yates with an explicit draw so the order does not depend on the
// standard library's shuffle implementation.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng)
{
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(v[i - 1], v[j]);
  }
}

} // namespace

std::vector<OsdId> osds_of(PgId pg, const ClusterMap& map, std::size_t width)
{
  const std::size_t total = map.total_osds();
  if (width > total)
    throw capacity_error("osds_of: width " + std::to_string(width) +
                         " exceeds " + std::to_string(total) + " OSDs");

  std::mt19937_64 rng(mix64(pg.value) ^ mix64(map.placement_seed ^ 0xc2b2ae35u));
  std::vector<std::size_t> nodes(map.node_count);
  std::iota(nodes.begin(), nodes.end(), 0);
  shuffle(nodes, rng);

  std::vector<std::vector<OsdId>> per_node(map.node_count);
  for (std::size_t n : nodes) {
    auto& local = per_node[n];
    for (std::size_t i = 0; i < map.osds_per_node; ++i)
      local.push_back(static_cast<OsdId>(n * map.osds_per_node + i));
    shuffle(local, rng);
  }

  std::vector<OsdId> out;
  out.reserve(width);
  for (std::size_t round = 0; out.size() < width; ++round)
    for (std::size_t n : nodes) {
      if (out.size() == width)
        break;
      out.push_back(per_node[n][round]);
    }
  return out;
}

} // namespace ecsim
