// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ecsim/placement.h"
#include "ecsim/rs_codec.h"

namespace ecsim {

inline constexpr std::uint64_t kDefaultMinIoBytes = 4096;
inline constexpr double kHeartbeatIntervalSeconds = 6.0;
// Reproduces 280KB/s of heartbeat traffic on 24 OSDs:
// 24 * 23 * 3043 B / 6 s = 279,956 B/s.
inline constexpr std::uint64_t kDefaultHeartbeatMessageBytes = 3043;

struct Replication {
  std::size_t copies = 3;
};

struct Erasure {
  CodeParams code;
};

// Which chunk moves are free: those staying on the coordinating OSD, or
// those staying on its node.
enum class NetBoundary { osd, node };

struct BackendConfig {
  std::variant<Replication, Erasure> mode = Replication{};
  std::uint64_t object_bytes = kDefaultObjectBytes;
  std::uint64_t min_io_bytes = kDefaultMinIoBytes;
  NetBoundary net_boundary = NetBoundary::osd;
  // Keep real chunk payloads and run the codec on every request.
  bool verify_payload = false;

  static BackendConfig replication(std::size_t copies);
  static BackendConfig erasure(std::size_t k, std::size_t m,
                               std::size_t chunk_bytes = kDefaultChunkBytes);

  bool is_erasure() const { return std::holds_alternative<Erasure>(mode); }
  const CodeParams& code() const { return std::get<Erasure>(mode).code; }
  std::size_t copies() const { return std::get<Replication>(mode).copies; }
  // OSDs per PG: k + m, or the replica count.
  std::size_t width() const;
  std::size_t default_pg_count() const;

  /// Throws config_error on an inconsistent configuration.
  void validate(const ClusterMap& map) const;
};

enum class IoOp { read, write };

struct IoRequest {
  IoOp op = IoOp::read;
  std::uint64_t file_offset = 0;
  std::uint64_t length = 0;
};

/**
 * Byte accounting for one request (or one internal operation such as
 * object initialization or repair). Per-OSD vectors are indexed by OsdId.
 */
struct IoEffects {
  std::vector<std::uint64_t> osd_read_bytes;
  std::vector<std::uint64_t> osd_write_bytes;
  std::uint64_t private_net_bytes = 0;
  std::uint64_t public_net_bytes = 0;
  std::uint64_t client_read_bytes = 0;
  std::uint64_t client_write_bytes = 0;
  std::uint64_t requests = 0;
  bool pg_conflict = false;

  IoEffects() = default;
  explicit IoEffects(std::size_t osd_count)
    : osd_read_bytes(osd_count, 0), osd_write_bytes(osd_count, 0) {}

  std::uint64_t storage_read_bytes() const;
  std::uint64_t storage_write_bytes() const;

  void add_read(OsdId osd, std::uint64_t bytes);
  void add_write(OsdId osd, std::uint64_t bytes);

  IoEffects& operator+=(const IoEffects& rhs);
};

/**
 * PG backend of one data pool. Owns the object store for a single run and
 * serves requests through the primary OSD of each object's PG.
 *
 * Replication: the primary forwards every write to r-1 peers; sub-unit
 * writes read the untouched remainder of each minimum I/O unit on every
 * replica. Reads are served by the primary alone.
 *
 * Erasure coding: objects are padded to whole stripes. The first write to
 * an object creates all of its data and coding shards. Full-stripe writes
 * encode without reading; partial writes read the data chunks they do not
 * fully cover, re-encode, and rewrite the touched data chunks plus all
 * coding chunks. Reads always assemble whole stripes from k chunks.
 */
class PgBackend {
public:
  PgBackend(BackendConfig cfg, ClusterMap map);

  const BackendConfig& config() const { return cfg_; }
  const ClusterMap& cluster() const { return map_; }
  std::size_t pg_count() const { return pg_count_; }
  std::size_t osd_count() const { return map_.total_osds(); }
  std::size_t stripes_per_object() const { return stripes_per_object_; }

  PgId pg_for(const ObjectId& obj) const;
  const std::vector<OsdId>& osds_for(const ObjectId& obj) const;

  /**
   * Dispatches to the replication or erasure path. In payload mode a write
   * needs `payload.size() == req.length` and a read fills `*out`.
   */
  IoEffects submit(const IoRequest& req,
                   std::span<const std::uint8_t> payload = {},
                   std::vector<std::uint8_t>* out = nullptr);

  IoEffects repl_write(const IoRequest& req,
                       std::span<const std::uint8_t> payload = {});
  IoEffects repl_read(const IoRequest& req,
                      std::vector<std::uint8_t>* out = nullptr);
  IoEffects ec_write(const IoRequest& req,
                     std::span<const std::uint8_t> payload = {});
  IoEffects ec_read(const IoRequest& req,
                    std::vector<std::uint8_t>* out = nullptr);
  /// Throws data_loss_error when a PG has lost more than m OSDs.
  IoEffects ec_degraded_read(const IoRequest& req,
                             const std::set<OsdId>& failed,
                             std::vector<std::uint8_t>* out = nullptr);

  /// Creates every shard of a pristine object. No-op under replication.
  IoEffects initialize_object(const ObjectId& obj);

  /**
   * Rebuilds every chunk (or replica) resident on `osd` onto a fresh
   * device in the same slot, pulling k surviving chunks per lost chunk.
   * The OSD is healthy afterwards.
   */
  IoEffects repair_osd(OsdId osd);

  /// Marks the OSD failed; in payload mode its chunks are discarded.
  void fail_osd(OsdId osd);
  const std::set<OsdId>& failed_osds() const { return failed_; }

  /**
   * Treats every object overlapping [0, file_bytes) as written, without
   * charging any effects.
   */
  void prefill(std::uint64_t file_bytes);

  /// Starts a new queue-depth window for PG conflict detection.
  void begin_batch() { in_flight_pgs_.clear(); }

  bool initialized(const ObjectId& obj) const;
  /// Chunk (or replica) bytes the OSD holds for written objects.
  std::uint64_t bytes_on_osd(OsdId osd) const;

private:
  struct ObjectState {
    bool initialized = false;
    // Payload mode only. Erasure: one buffer per shard, empty while lost.
    // Replication: a single buffer shared by all replicas.
    std::vector<std::vector<std::uint8_t>> shards;
  };

  ObjectState* find_state(const ObjectId& obj);
  ObjectState& materialize(const ObjectId& obj);
  template <typename Fn> void for_each_written_object(Fn&& fn) const;

  bool is_local(OsdId coordinator, OsdId osd) const;
  OsdId coordinator(const std::vector<OsdId>& osds,
                    const std::set<OsdId>& failed) const;
  std::size_t failed_members(const std::vector<OsdId>& osds,
                             const std::set<OsdId>& failed) const;

  void move_chunk_read(IoEffects& fx, OsdId coord, OsdId osd, std::uint64_t bytes) const;
  void move_chunk_write(IoEffects& fx, OsdId coord, OsdId osd, std::uint64_t bytes) const;

  IoEffects ec_read_impl(const IoRequest& req, const std::set<OsdId>& failed,
                         std::vector<std::uint8_t>* out);
  void note_pgs(IoEffects& fx, const IoRequest& req);

  // Fills `stripe` (k * chunk bytes) with the current stripe contents.
  void load_stripe(const ObjectId& obj, std::size_t s,
                   const std::vector<std::size_t>& chunks_read,
                   bool decode_needed, std::vector<std::uint8_t>& stripe);
  // k surviving chunk indices in index order.
  std::vector<std::size_t> survivors(const std::vector<OsdId>& osds,
                                     const std::set<OsdId>& failed) const;

  BackendConfig cfg_;
  ClusterMap map_;
  std::size_t pg_count_;
  std::size_t stripes_per_object_ = 0;
  std::optional<RsCodec> codec_;
  std::vector<std::vector<OsdId>> pg_osds_;

  std::map<std::uint64_t, ObjectState> objects_;
  std::uint64_t prefill_watermark_ = 0;  // objects below are written
  std::set<OsdId> failed_;
  std::set<std::uint32_t> in_flight_pgs_;
};

/// Heartbeats exchanged among all OSDs over `duration_s` seconds.
std::uint64_t heartbeat_traffic(const ClusterMap& map, double duration_s,
                                std::uint64_t msg_bytes = kDefaultHeartbeatMessageBytes);

} // namespace ecsim
