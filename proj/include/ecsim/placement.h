// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ecsim {

inline constexpr std::uint64_t kDefaultObjectBytes = 4ull << 20;
inline constexpr std::size_t kDefaultPgCountReplicated = 512;
inline constexpr std::size_t kDefaultPgCountErasure = 256;
inline constexpr std::size_t kDefaultPgCountMeta = 128;

using OsdId = std::uint32_t;

struct ClusterMap {
  std::size_t node_count = 4;
  std::size_t osds_per_node = 6;
  std::size_t pg_count_data = 0;  // 0: default for the pool type
  std::size_t pg_count_meta = kDefaultPgCountMeta;
  std::uint64_t placement_seed = 0;

  std::size_t total_osds() const { return node_count * osds_per_node; }
  std::size_t node_of(OsdId osd) const { return osd / osds_per_node; }
};

struct ObjectId {
  std::uint64_t pool = 0;
  std::uint64_t index = 0;

  auto operator<=>(const ObjectId&) const = default;
};

struct PgId {
  std::uint32_t value = 0;
  auto operator<=>(const PgId&) const = default;
};

struct ObjectLocation {
  ObjectId object;
  std::uint64_t intra_offset = 0;
};

/// Object containing a file offset; pool 0.
ObjectLocation object_of(std::uint64_t file_offset, std::uint64_t object_bytes,
                         std::uint64_t pool = 0);

/// 64-bit finalizer (splitmix64); stable across platforms and runs.
std::uint64_t mix64(std::uint64_t x);

/**
 * Object to PG. A per-(pool, seed) hash picks an offset and a stride
 * coprime with pg_count; the object index is then mapped affinely, so any
 * pg_count consecutive objects of a pool cover every PG exactly once.
 */
PgId pg_of(const ObjectId& obj, std::size_t pg_count, std::uint64_t seed = 0);

/**
 * Ordered OSD list for a PG. Nodes and the OSDs inside each node are
 * shuffled by a generator seeded with (pg, placement_seed); members are
 * then taken round-robin across nodes so no node holds more than
 * ceil(width / node_count) of them. Entry 0 is the primary.
 * Throws capacity_error when width exceeds the OSD count.
 */
std::vector<OsdId> osds_of(PgId pg, const ClusterMap& map, std::size_t width);

} // namespace ecsim
