// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/storage_backend.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecsim/errors.h"

namespace ecsim {

// --- BackendConfig ----------------------------------------------------------

BackendConfig BackendConfig::replication(std::size_t copies)
{
  BackendConfig c;
  c.mode = Replication{copies};
  return c;
}

BackendConfig BackendConfig::erasure(std::size_t k, std::size_t m,
                                     std::size_t chunk_bytes)
{
  BackendConfig c;
  c.mode = Erasure{CodeParams(k, m, chunk_bytes)};
  return c;
}

std::size_t BackendConfig::width() const
{
  return is_erasure() ? code().width() : copies();
}

std::size_t BackendConfig::default_pg_count() const
{
  return is_erasure() ? kDefaultPgCountErasure : kDefaultPgCountReplicated;
}

void BackendConfig::validate(const ClusterMap& map) const
{
  if (object_bytes == 0)
    throw config_error("backend: object_bytes must be > 0");
  if (min_io_bytes == 0)
    throw config_error("backend: min_io_bytes must be > 0");
  if (is_erasure()) {
    const auto& p = code();
    if (p.k == 0 || p.m == 0 || p.chunk_bytes == 0)
      throw config_error("backend: k, m and chunk_bytes must be >= 1");
    if (p.chunk_bytes % min_io_bytes != 0)
      throw config_error("backend: min_io_bytes must divide chunk_bytes");
  } else {
    if (copies() == 0)
      throw config_error("backend: replica count must be >= 1");
    if (object_bytes % min_io_bytes != 0)
      throw config_error("backend: min_io_bytes must divide object_bytes");
  }
  if (map.node_count == 0 || map.osds_per_node == 0)
    throw config_error("cluster: node_count and osds_per_node must be >= 1");
  if (width() > map.total_osds())
    throw config_error("cluster: " + std::to_string(map.total_osds()) +
                       " OSDs cannot hold placement width " +
                       std::to_string(width()));
}

// --- IoEffects --------------------------------------------------------------

std::uint64_t IoEffects::storage_read_bytes() const
{
  return std::accumulate(osd_read_bytes.begin(), osd_read_bytes.end(),
                         std::uint64_t{0});
}

std::uint64_t IoEffects::storage_write_bytes() const
{
  return std::accumulate(osd_write_bytes.begin(), osd_write_bytes.end(),
                         std::uint64_t{0});
}

void IoEffects::add_read(OsdId osd, std::uint64_t bytes)
{
  if (osd >= osd_read_bytes.size())
    osd_read_bytes.resize(osd + 1, 0);
  osd_read_bytes[osd] += bytes;
}

void IoEffects::add_write(OsdId osd, std::uint64_t bytes)
{
  if (osd >= osd_write_bytes.size())
    osd_write_bytes.resize(osd + 1, 0);
  osd_write_bytes[osd] += bytes;
}

IoEffects& IoEffects::operator+=(const IoEffects& rhs)
{
  if (osd_read_bytes.size() < rhs.osd_read_bytes.size())
    osd_read_bytes.resize(rhs.osd_read_bytes.size(), 0);
  if (osd_write_bytes.size() < rhs.osd_write_bytes.size())
    osd_write_bytes.resize(rhs.osd_write_bytes.size(), 0);
  for (std::size_t i = 0; i < rhs.osd_read_bytes.size(); ++i)
    osd_read_bytes[i] += rhs.osd_read_bytes[i];
  for (std::size_t i = 0; i < rhs.osd_write_bytes.size(); ++i)
    osd_write_bytes[i] += rhs.osd_write_bytes[i];
  private_net_bytes += rhs.private_net_bytes;
  public_net_bytes += rhs.public_net_bytes;
  client_read_bytes += rhs.client_read_bytes;
  client_write_bytes += rhs.client_write_bytes;
  requests += rhs.requests;
  pg_conflict = pg_conflict || rhs.pg_conflict;
  return *this;
}

// --- PgBackend --------------------------------------------------------------

namespace {

// Part of a request that falls inside one object.
struct Piece {
  ObjectId obj;
  std::uint64_t offset;   // within the object
  std::uint64_t length;
  std::uint64_t req_pos;  // offset within the request payload
};

std::vector<Piece> split(const IoRequest& req, std::uint64_t object_bytes)
{
  std::vector<Piece> pieces;
  std::uint64_t pos = 0;
  while (pos < req.length) {
    const auto loc = object_of(req.file_offset + pos, object_bytes);
    const std::uint64_t len =
      std::min(req.length - pos, object_bytes - loc.intra_offset);
    pieces.push_back({loc.object, loc.intra_offset, len, pos});
    pos += len;
  }
  return pieces;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b)
{
  return (a + b - 1) / b;
}

} // namespace

PgBackend::PgBackend(BackendConfig cfg, ClusterMap map)
  : cfg_(std::move(cfg)), map_(map)
{
  cfg_.validate(map_);
  pg_count_ = map_.pg_count_data ? map_.pg_count_data : cfg_.default_pg_count();
  if (cfg_.is_erasure()) {
    codec_.emplace(cfg_.code());
    stripes_per_object_ =
      ceil_div(cfg_.object_bytes, cfg_.code().stripe_width_bytes());
  }
  pg_osds_.reserve(pg_count_);
  for (std::size_t pg = 0; pg < pg_count_; ++pg)
    pg_osds_.push_back(
      osds_of(PgId{static_cast<std::uint32_t>(pg)}, map_, cfg_.width()));
}

PgId PgBackend::pg_for(const ObjectId& obj) const
{
  return pg_of(obj, pg_count_, map_.placement_seed);
}

const std::vector<OsdId>& PgBackend::osds_for(const ObjectId& obj) const
{
  return pg_osds_[pg_for(obj).value];
}

bool PgBackend::is_local(OsdId coordinator, OsdId osd) const
{
  if (cfg_.net_boundary == NetBoundary::node)
    return map_.node_of(coordinator) == map_.node_of(osd);
  return coordinator == osd;
}

OsdId PgBackend::coordinator(const std::vector<OsdId>& osds,
                             const std::set<OsdId>& failed) const
{
  for (OsdId o : osds)
    if (!failed.contains(o))
      return o;
  throw data_loss_error("every OSD of the placement group has failed");
}

std::size_t PgBackend::failed_members(const std::vector<OsdId>& osds,
                                      const std::set<OsdId>& failed) const
{
  return std::count_if(osds.begin(), osds.end(),
                       [&](OsdId o) { return failed.contains(o); });
}

std::vector<std::size_t> PgBackend::survivors(const std::vector<OsdId>& osds,
                                              const std::set<OsdId>& failed) const
{
  const std::size_t k = cfg_.code().k;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < osds.size() && out.size() < k; ++j)
    if (!failed.contains(osds[j]))
      out.push_back(j);
  if (out.size() < k)
    throw data_loss_error("only " + std::to_string(out.size()) +
                          " chunks survive, " + std::to_string(k) + " needed");
  return out;
}

void PgBackend::move_chunk_read(IoEffects& fx, OsdId coord, OsdId osd,
                                std::uint64_t bytes) const
{
  fx.add_read(osd, bytes);
  if (!is_local(coord, osd))
    fx.private_net_bytes += bytes;
}

void PgBackend::move_chunk_write(IoEffects& fx, OsdId coord, OsdId osd,
                                 std::uint64_t bytes) const
{
  fx.add_write(osd, bytes);
  if (!is_local(coord, osd))
    fx.private_net_bytes += bytes;
}

PgBackend::ObjectState* PgBackend::find_state(const ObjectId& obj)
{
  auto it = objects_.find(obj.index);
  return it == objects_.end() ? nullptr : &it->second;
}

PgBackend::ObjectState& PgBackend::materialize(const ObjectId& obj)
{
  auto [it, inserted] = objects_.try_emplace(obj.index);
  ObjectState& st = it->second;
  if (inserted && cfg_.verify_payload) {
    if (cfg_.is_erasure()) {
      const auto& osds = osds_for(obj);
      const std::uint64_t shard_bytes =
        stripes_per_object_ * cfg_.code().chunk_bytes;
      st.shards.resize(osds.size());
      for (std::size_t j = 0; j < osds.size(); ++j)
        if (!failed_.contains(osds[j]))
          st.shards[j].assign(shard_bytes, 0);
    } else {
      st.shards.assign(1, std::vector<std::uint8_t>(cfg_.object_bytes, 0));
    }
  }
  return st;
}

bool PgBackend::initialized(const ObjectId& obj) const
{
  if (obj.index < prefill_watermark_)
    return true;
  auto it = objects_.find(obj.index);
  return it != objects_.end() && it->second.initialized;
}

template <typename Fn>
void PgBackend::for_each_written_object(Fn&& fn) const
{
  for (std::uint64_t i = 0; i < prefill_watermark_; ++i)
    fn(ObjectId{0, i});
  for (const auto& [index, st] : objects_)
    if (st.initialized && index >= prefill_watermark_)
      fn(ObjectId{0, index});
}

void PgBackend::note_pgs(IoEffects& fx, const IoRequest& req)
{
  std::vector<std::uint32_t> pgs;
  for (const auto& p : split(req, cfg_.object_bytes))
    pgs.push_back(pg_for(p.obj).value);
  for (auto pg : pgs)
    if (in_flight_pgs_.contains(pg))
      fx.pg_conflict = true;
  in_flight_pgs_.insert(pgs.begin(), pgs.end());
}

IoEffects PgBackend::submit(const IoRequest& req,
                            std::span<const std::uint8_t> payload,
                            std::vector<std::uint8_t>* out)
{
  if (req.op == IoOp::write)
    return cfg_.is_erasure() ? ec_write(req, payload) : repl_write(req, payload);
  if (!cfg_.is_erasure())
    return repl_read(req, out);
  return failed_.empty() ? ec_read(req, out)
                         : ec_degraded_read(req, failed_, out);
}

// --- replication ------------------------------------------------------------

IoEffects PgBackend::repl_write(const IoRequest& req,
                                std::span<const std::uint8_t> payload)
{
  if (req.length == 0)
    throw shape_error("write: length must be >= 1");
  if (cfg_.verify_payload && payload.size() != req.length)
    throw shape_error("write: payload size does not match request length");

  IoEffects fx(osd_count());
  fx.requests = 1;
  fx.client_write_bytes = req.length;
  fx.public_net_bytes = req.length;
  note_pgs(fx, req);

  const std::uint64_t unit = cfg_.min_io_bytes;
  for (const auto& p : split(req, cfg_.object_bytes)) {
    const auto& osds = osds_for(p.obj);
    const OsdId coord = coordinator(osds, failed_);
    const std::uint64_t lo = p.offset / unit * unit;
    const std::uint64_t hi = ceil_div(p.offset + p.length, unit) * unit;
    const std::uint64_t rounded = hi - lo;
    const std::uint64_t remainder = rounded - p.length;
    for (OsdId o : osds) {
      if (failed_.contains(o))
        continue;
      fx.add_read(o, remainder);
      move_chunk_write(fx, coord, o, rounded);
    }
    if (cfg_.verify_payload || !initialized(p.obj)) {
      ObjectState& st = materialize(p.obj);
      st.initialized = true;
      if (cfg_.verify_payload)
        std::copy_n(payload.begin() + p.req_pos, p.length,
                    st.shards[0].begin() + p.offset);
    }
  }
  return fx;
}

IoEffects PgBackend::repl_read(const IoRequest& req, std::vector<std::uint8_t>* out)
{
  if (req.length == 0)
    throw shape_error("read: length must be >= 1");
  IoEffects fx(osd_count());
  fx.requests = 1;
  fx.client_read_bytes = req.length;
  fx.public_net_bytes = req.length;
  note_pgs(fx, req);
  if (out)
    out->assign(req.length, 0);

  const std::uint64_t unit = cfg_.min_io_bytes;
  for (const auto& p : split(req, cfg_.object_bytes)) {
    const OsdId coord = coordinator(osds_for(p.obj), failed_);
    const std::uint64_t lo = p.offset / unit * unit;
    const std::uint64_t hi = ceil_div(p.offset + p.length, unit) * unit;
    fx.add_read(coord, hi - lo);
    if (out && cfg_.verify_payload) {
      if (const ObjectState* st = find_state(p.obj); st && !st->shards.empty())
        std::copy_n(st->shards[0].begin() + p.offset, p.length,
                    out->begin() + p.req_pos);
    }
  }
  return fx;
}

// --- erasure coding ---------------------------------------------------------

IoEffects PgBackend::initialize_object(const ObjectId& obj)
{
  IoEffects fx(osd_count());
  if (!cfg_.is_erasure())
    return fx;
  if (initialized(obj))
    throw internal_error("initialize_object: object " +
                         std::to_string(obj.index) + " already initialized");

  const auto& osds = osds_for(obj);
  if (failed_members(osds, failed_) > cfg_.code().m)
    throw data_loss_error("initialize_object: too many failed OSDs in PG");
  const OsdId coord = coordinator(osds, failed_);
  const std::uint64_t shard_bytes = stripes_per_object_ * cfg_.code().chunk_bytes;
  for (OsdId o : osds)
    if (!failed_.contains(o))
      move_chunk_write(fx, coord, o, shard_bytes);

  materialize(obj).initialized = true;
  return fx;
}

void PgBackend::load_stripe(const ObjectId& obj, std::size_t s,
                            const std::vector<std::size_t>& chunks_read,
                            bool decode_needed, std::vector<std::uint8_t>& stripe)
{
  const auto& p = cfg_.code();
  const std::size_t C = p.chunk_bytes;
  const ObjectState* st = find_state(obj);
  if (!st || st->shards.empty()) {
    std::fill(stripe.begin(), stripe.end(), 0);
    return;
  }
  const std::size_t base = s * C;
  if (!decode_needed) {
    for (std::size_t j : chunks_read)
      std::copy_n(st->shards[j].begin() + base, C, stripe.begin() + j * C);
    return;
  }
  std::vector<Chunk> avail;
  avail.reserve(chunks_read.size());
  for (std::size_t j : chunks_read) {
    const auto& shard = st->shards[j];
    if (shard.empty())
      throw internal_error("load_stripe: surviving shard has no payload");
    avail.push_back(Chunk::make(p, j, {shard.begin() + base,
                                       shard.begin() + base + C}));
  }
  const auto data = codec_->decode(avail);
  for (std::size_t j = 0; j < p.k; ++j)
    std::copy(data[j].payload.begin(), data[j].payload.end(),
              stripe.begin() + j * C);
}

IoEffects PgBackend::ec_write(const IoRequest& req,
                              std::span<const std::uint8_t> payload)
{
  if (req.length == 0)
    throw shape_error("write: length must be >= 1");
  if (cfg_.verify_payload && payload.size() != req.length)
    throw shape_error("write: payload size does not match request length");

  IoEffects fx(osd_count());
  fx.requests = 1;
  fx.client_write_bytes = req.length;
  fx.public_net_bytes = req.length;
  note_pgs(fx, req);

  const auto& code = cfg_.code();
  const std::size_t k = code.k;
  const std::size_t n = code.width();
  const std::uint64_t C = code.chunk_bytes;
  const std::uint64_t SW = code.stripe_width_bytes();
  std::vector<std::uint8_t> stripe(cfg_.verify_payload ? SW : 0);
  std::vector<std::vector<std::uint8_t>> coding(
    cfg_.verify_payload ? code.m : 0, std::vector<std::uint8_t>(C));

  for (const auto& piece : split(req, cfg_.object_bytes)) {
    if (!initialized(piece.obj))
      fx += initialize_object(piece.obj);
    const auto& osds = osds_for(piece.obj);
    if (failed_members(osds, failed_) > code.m)
      throw data_loss_error("write: more than m OSDs of the PG have failed");
    const OsdId coord = coordinator(osds, failed_);
    const auto is_failed = [&](std::size_t j) { return failed_.contains(osds[j]); };

    const std::uint64_t end = piece.offset + piece.length;
    for (std::uint64_t s = piece.offset / SW; s * SW < end; ++s) {
      const std::uint64_t a = std::max(piece.offset, s * SW) - s * SW;
      const std::uint64_t b = std::min(end, (s + 1) * SW) - s * SW;
      const bool full = a == 0 && b == SW;
      const std::size_t c0 = a / C;
      const std::size_t c1 = (b - 1) / C;

      std::vector<std::size_t> read_set;
      bool degraded = false;
      if (!full) {
        for (std::size_t j = 0; j < k; ++j)
          if (!(a <= j * C && (j + 1) * C <= b))
            read_set.push_back(j);
        degraded = std::any_of(read_set.begin(), read_set.end(), is_failed);
        if (degraded)
          read_set = survivors(osds, failed_);
      }
      for (std::size_t j : read_set)
        move_chunk_read(fx, coord, osds[j], C);
      for (std::size_t j = c0; j <= c1; ++j)
        if (!is_failed(j))
          move_chunk_write(fx, coord, osds[j], C);
      for (std::size_t j = k; j < n; ++j)
        if (!is_failed(j))
          move_chunk_write(fx, coord, osds[j], C);

      if (!cfg_.verify_payload)
        continue;
      load_stripe(piece.obj, s, read_set, degraded, stripe);
      const std::uint64_t src = piece.req_pos + (s * SW + a - piece.offset);
      std::copy_n(payload.begin() + src, b - a, stripe.begin() + a);

      std::vector<std::span<const std::uint8_t>> in;
      std::vector<std::span<std::uint8_t>> outs;
      for (std::size_t j = 0; j < k; ++j)
        in.emplace_back(stripe.data() + j * C, C);
      for (auto& c : coding)
        outs.emplace_back(c);
      codec_->encode(in, outs);

      ObjectState& st = materialize(piece.obj);
      const std::uint64_t base = s * C;
      for (std::size_t j = c0; j <= c1; ++j)
        if (!is_failed(j))
          std::copy_n(stripe.begin() + j * C, C, st.shards[j].begin() + base);
      for (std::size_t i = 0; i < code.m; ++i)
        if (!is_failed(k + i))
          std::copy(coding[i].begin(), coding[i].end(),
                    st.shards[k + i].begin() + base);
    }
  }
  return fx;
}

IoEffects PgBackend::ec_read_impl(const IoRequest& req,
                                  const std::set<OsdId>& failed,
                                  std::vector<std::uint8_t>* out)
{
  if (req.length == 0)
    throw shape_error("read: length must be >= 1");
  IoEffects fx(osd_count());
  fx.requests = 1;
  fx.client_read_bytes = req.length;
  fx.public_net_bytes = req.length;
  note_pgs(fx, req);
  if (out)
    out->assign(req.length, 0);

  const auto& code = cfg_.code();
  const std::size_t k = code.k;
  const std::uint64_t C = code.chunk_bytes;
  const std::uint64_t SW = code.stripe_width_bytes();
  const bool want_payload = out && cfg_.verify_payload;
  std::vector<std::uint8_t> stripe(want_payload ? SW : 0);
  std::vector<std::size_t> all_data(k);
  std::iota(all_data.begin(), all_data.end(), 0);

  for (const auto& piece : split(req, cfg_.object_bytes)) {
    const auto& osds = osds_for(piece.obj);
    if (failed_members(osds, failed) > code.m)
      throw data_loss_error("read: more than m OSDs of the PG have failed");
    const OsdId coord = coordinator(osds, failed);
    const bool data_ok = std::none_of(
      osds.begin(), osds.begin() + k, [&](OsdId o) { return failed.contains(o); });
    const auto read_set = data_ok ? all_data : survivors(osds, failed);

    const std::uint64_t end = piece.offset + piece.length;
    for (std::uint64_t s = piece.offset / SW; s * SW < end; ++s) {
      for (std::size_t j : read_set)
        move_chunk_read(fx, coord, osds[j], C);
      if (!want_payload)
        continue;
      const std::uint64_t a = std::max(piece.offset, s * SW) - s * SW;
      const std::uint64_t b = std::min(end, (s + 1) * SW) - s * SW;
      load_stripe(piece.obj, s, read_set, !data_ok, stripe);
      std::copy_n(stripe.begin() + a, b - a,
                  out->begin() + piece.req_pos + (s * SW + a - piece.offset));
    }
  }
  return fx;
}

IoEffects PgBackend::ec_read(const IoRequest& req, std::vector<std::uint8_t>* out)
{
  return ec_read_impl(req, failed_, out);
}

IoEffects PgBackend::ec_degraded_read(const IoRequest& req,
                                      const std::set<OsdId>& failed,
                                      std::vector<std::uint8_t>* out)
{
  std::set<OsdId> all = failed;
  all.insert(failed_.begin(), failed_.end());
  return ec_read_impl(req, all, out);
}

// --- failures ---------------------------------------------------------------

void PgBackend::fail_osd(OsdId osd)
{
  if (osd >= osd_count())
    throw config_error("fail_osd: no OSD " + std::to_string(osd));
  failed_.insert(osd);
  if (!cfg_.verify_payload || !cfg_.is_erasure())
    return;
  for (auto& [index, st] : objects_) {
    if (st.shards.empty())
      continue;
    const auto& osds = osds_for(ObjectId{0, index});
    for (std::size_t j = 0; j < osds.size(); ++j)
      if (osds[j] == osd)
        std::vector<std::uint8_t>().swap(st.shards[j]);
  }
}

std::uint64_t PgBackend::bytes_on_osd(OsdId osd) const
{
  const std::uint64_t per_object = cfg_.is_erasure()
    ? stripes_per_object_ * cfg_.code().chunk_bytes
    : cfg_.object_bytes;
  std::uint64_t total = 0;
  for_each_written_object([&](const ObjectId& obj) {
    const auto& osds = osds_for(obj);
    if (std::find(osds.begin(), osds.end(), osd) != osds.end())
      total += per_object;
  });
  return total;
}

IoEffects PgBackend::repair_osd(OsdId osd)
{
  if (osd >= osd_count())
    throw config_error("repair_osd: no OSD " + std::to_string(osd));
  IoEffects fx(osd_count());
  std::set<OsdId> down = failed_;
  down.insert(osd);

  if (!cfg_.is_erasure()) {
    const std::uint64_t bytes = cfg_.object_bytes;
    for_each_written_object([&](const ObjectId& obj) {
      const auto& osds = osds_for(obj);
      if (std::find(osds.begin(), osds.end(), osd) == osds.end())
        return;
      const OsdId src = coordinator(osds, down);
      fx.add_read(src, bytes);
      fx.private_net_bytes += bytes;
      fx.add_write(osd, bytes);
    });
    failed_.erase(osd);
    return fx;
  }

  const auto& code = cfg_.code();
  const std::uint64_t C = code.chunk_bytes;
  const std::uint64_t S = stripes_per_object_;
  std::vector<ObjectId> affected;
  for_each_written_object([&](const ObjectId& obj) {
    const auto& osds = osds_for(obj);
    if (std::find(osds.begin(), osds.end(), osd) != osds.end())
      affected.push_back(obj);
  });

  for (const auto& obj : affected) {
    const auto& osds = osds_for(obj);
    if (failed_members(osds, down) > code.m)
      throw data_loss_error("repair: object " + std::to_string(obj.index) +
                            " lost more than m chunks");
    const auto srcs = survivors(osds, down);
    const std::size_t lost =
      std::find(osds.begin(), osds.end(), osd) - osds.begin();
    for (std::size_t j : srcs) {
      fx.add_read(osds[j], S * C);
      fx.private_net_bytes += S * C;
    }
    fx.add_write(osd, S * C);

    ObjectState* st = cfg_.verify_payload ? find_state(obj) : nullptr;
    if (!st || st->shards.empty())
      continue;
    std::vector<std::uint8_t> rebuilt(S * C);
    std::vector<std::uint8_t> stripe(code.stripe_width_bytes());
    std::vector<std::uint8_t> parity(C);
    for (std::uint64_t s = 0; s < S; ++s) {
      load_stripe(obj, s, srcs, true, stripe);
      if (lost < code.k) {
        std::copy_n(stripe.begin() + lost * C, C, rebuilt.begin() + s * C);
        continue;
      }
      std::fill(parity.begin(), parity.end(), 0);
      const auto& row = codec_->generator().row(lost);
      for (std::size_t j = 0; j < code.k; ++j)
        gf256::mul_add_region(row[j], {stripe.data() + j * C, C}, parity);
      std::copy(parity.begin(), parity.end(), rebuilt.begin() + s * C);
    }
    st->shards[lost] = std::move(rebuilt);
  }
  failed_.erase(osd);
  return fx;
}

void PgBackend::prefill(std::uint64_t file_bytes)
{
  const std::uint64_t count = ceil_div(file_bytes, cfg_.object_bytes);
  if (!cfg_.verify_payload) {
    prefill_watermark_ = std::max(prefill_watermark_, count);
    return;
  }
  for (std::uint64_t i = 0; i < count; ++i)
    materialize(ObjectId{0, i}).initialized = true;
}

std::uint64_t heartbeat_traffic(const ClusterMap& map, double duration_s,
                                std::uint64_t msg_bytes)
{
  if (duration_s < 0)
    throw config_error("heartbeat: duration must be >= 0");
  const double n = static_cast<double>(map.total_osds());
  const double pairs = n * (n > 0 ? n - 1 : 0);
  return static_cast<std::uint64_t>(
    std::llround(pairs * static_cast<double>(msg_bytes) *
                 (duration_s / kHeartbeatIntervalSeconds)));
}

} // namespace ecsim
