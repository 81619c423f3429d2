// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/experiment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "ecsim/errors.h"
#include "ecsim/gf256.h"

namespace ecsim {

// --- config text ------------------------------------------------------------

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
  std::size_t line = 0;
};

std::string trim(std::string s)
{
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<Section> read_sections(std::istream& is)
{
  std::vector<Section> sections;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(lineno) +
                           ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw config_error("config line " + std::to_string(lineno) +
                           ": empty section name");
      sections.push_back({name, {}, lineno});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key = value");
    if (sections.empty())
      throw config_error("config line " + std::to_string(lineno) +
                         ": key outside of any section");
    sections.back().entries.push_back(
      {trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
  }
  return sections;
}

void apply_override(std::vector<Section>& sections, const std::string& text)
{
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw config_error("override '" + text + "': expected section.key=value");
  const std::string path = trim(text.substr(0, eq));
  const std::string value = trim(text.substr(eq + 1));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
    throw config_error("override '" + text + "': expected section.key=value");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);

  auto it = std::find_if(sections.begin(), sections.end(),
                         [&](const Section& s) { return s.name == section; });
  if (it == sections.end()) {
    sections.push_back({section, {}, 0});
    it = std::prev(sections.end());
  }
  for (auto& e : it->entries)
    if (e.key == key) {
      e.value = value;
      return;
    }
  it->entries.push_back({key, value, 0});
}

// Typed access to one section's keys; every key must be consumed.
class Fields {
public:
  Fields(const Section& s) : section_(s) {}

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string str(const std::string& key, const std::string& def = {}) {
    const Entry* e = find(key);
    return e ? e->value : def;
  }

  std::uint64_t size(const std::string& key, std::uint64_t def) {
    const Entry* e = find(key);
    if (!e)
      return def;
    try {
      return parse_size(e->value);
    } catch (const config_error&) {
      fail(key, "bad size '" + e->value + "'");
    }
  }

  std::vector<std::uint64_t> sizes(const std::string& key) {
    std::vector<std::uint64_t> out;
    const Entry* e = find(key);
    if (!e)
      return out;
    std::istringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty())
        continue;
      try {
        out.push_back(parse_size(item));
      } catch (const config_error&) {
        fail(key, "bad size '" + item + "'");
      }
    }
    if (out.empty())
      fail(key, "empty list");
    return out;
  }

  double real(const std::string& key, double def) {
    const Entry* e = find(key);
    if (!e)
      return def;
    try {
      std::size_t used = 0;
      const double v = std::stod(e->value, &used);
      if (used != e->value.size())
        throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail(key, "bad number '" + e->value + "'");
    }
  }

  bool flag(const std::string& key, bool def) {
    const Entry* e = find(key);
    if (!e)
      return def;
    const std::string v = lower(e->value);
    if (v == "true" || v == "yes" || v == "on" || v == "1")
      return true;
    if (v == "false" || v == "no" || v == "off" || v == "0")
      return false;
    fail(key, "bad boolean '" + e->value + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw config_error(section_.name + "." + key + ": " + what);
  }

  // Rejects keys nothing asked for.
  void finish() const {
    for (const auto& e : section_.entries)
      if (!used_.contains(e.key))
        throw config_error(section_.name + "." + e.key + ": unknown key");
  }

private:
  const Entry* find(const std::string& key) const {
    used_.insert(key);
    const Entry* hit = nullptr;
    for (const auto& e : section_.entries)
      if (e.key == key)
        hit = &e;
    return hit;
  }

  const Section& section_;
  mutable std::set<std::string> used_;
};

NamedBackend parse_backend(const std::string& name, Fields& f)
{
  NamedBackend nb;
  nb.name = name;
  const std::string type = lower(f.str("type", "erasure"));
  if (type == "replication") {
    nb.config = BackendConfig::replication(f.size("copies", 3));
    for (const char* k : {"k", "m", "chunk_bytes"})
      if (f.has(k))
        f.fail(k, "not valid for a replicated backend");
  } else if (type == "erasure") {
    const auto k = f.size("k", 6);
    const auto m = f.size("m", 3);
    const auto chunk = f.size("chunk_bytes", kDefaultChunkBytes);
    if (k == 0 || m == 0 || chunk == 0)
      f.fail(k == 0 ? "k" : m == 0 ? "m" : "chunk_bytes", "must be >= 1");
    nb.config = BackendConfig::erasure(k, m, chunk);
    if (f.has("copies"))
      f.fail("copies", "not valid for an erasure-coded backend");
  } else {
    f.fail("type", "expected replication or erasure, got '" + type + "'");
  }
  nb.config.object_bytes = f.size("object_bytes", kDefaultObjectBytes);
  nb.config.min_io_bytes = f.size("min_io_bytes", kDefaultMinIoBytes);
  const std::string boundary = lower(f.str("net_boundary", "osd"));
  if (boundary == "osd")
    nb.config.net_boundary = NetBoundary::osd;
  else if (boundary == "node")
    nb.config.net_boundary = NetBoundary::node;
  else
    f.fail("net_boundary", "expected osd or node");
  return nb;
}

WorkloadEntry parse_workload(const std::string& name, Fields& f,
                             std::uint64_t run_seed,
                             const std::filesystem::path& base_dir)
{
  WorkloadEntry w;
  w.name = name;
  const bool has_preset = f.has("preset");
  const bool has_trace = f.has("trace");
  if (has_preset && has_trace)
    f.fail("trace", "cannot be combined with preset");

  if (has_preset) {
    try {
      w.spec = preset(lower(f.str("preset")));
    } catch (const config_error& e) {
      f.fail("preset", e.what());
    }
    w.spec.name = name;
  } else if (has_trace) {
    std::filesystem::path p = f.str("trace");
    if (p.is_relative() && !base_dir.empty())
      p = base_dir / p;
    w.trace = p;
    w.spec.name = name;
  } else {
    const std::string pattern = lower(f.str("pattern", "random"));
    double random_fraction = 1.0;
    if (pattern == "sequential")
      random_fraction = 0.0;
    else if (pattern != "random")
      f.fail("pattern", "expected sequential or random");
    random_fraction = f.real("random_fraction", random_fraction);
    if (!f.has("block_bytes"))
      f.fail("block_bytes", "required for a synthetic workload");
    StreamMix s;
    s.label = "main";
    s.read_fraction = f.real("read_fraction", 0.0);
    s.random_fraction = random_fraction;
    s.metadata_fraction = f.real("metadata_fraction", 0.0);
    w.spec.name = name;
    w.spec.streams.push_back(s);
    if (!f.has("total_bytes"))
      f.fail("total_bytes", "required for a synthetic workload");
  }

  w.block_sizes = f.sizes("block_bytes");
  w.spec.total_bytes = f.size("total_bytes", w.spec.total_bytes);
  w.spec.file_bytes = f.size("file_bytes", kDefaultFileBytes);
  w.spec.seed = f.size("seed", run_seed);
  w.spec.prefill = f.flag("prefill", true);
  if (!w.trace && !w.block_sizes.empty())
    for (auto& s : w.spec.streams)
      s.block = BlockSizeDist::fixed(w.block_sizes.front());
  if (w.trace && !w.block_sizes.empty())
    f.fail("block_bytes", "not valid for a trace workload");
  return w;
}

} // namespace

std::uint64_t parse_size(const std::string& text)
{
  const std::string t = trim(text);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p == t.data())
    throw config_error("bad size '" + text + "'");
  std::string suffix = lower(trim(std::string(p, t.data() + t.size())));
  if (suffix.ends_with("ib"))
    suffix.erase(suffix.size() - 2);
  else if (suffix.size() == 2 && suffix.back() == 'b')
    suffix.pop_back();
  int shift = 0;
  if (suffix.empty() || suffix == "b")
    shift = 0;
  else if (suffix == "k")
    shift = 10;
  else if (suffix == "m")
    shift = 20;
  else if (suffix == "g")
    shift = 30;
  else if (suffix == "t")
    shift = 40;
  else
    throw config_error("bad size suffix in '" + text + "'");
  if (shift && v > (~std::uint64_t{0} >> shift))
    throw config_error("size '" + text + "' overflows");
  return v << shift;
}

void ExperimentConfig::validate() const
{
  if (backends.empty())
    throw config_error("backend: at least one [backend.NAME] section is required");
  if (workloads.empty())
    throw config_error("workload: at least one [workload.NAME] section is required");
  if (queue_depth == 0)
    throw config_error("run.queue_depth: must be >= 1");
  if (heartbeat_duration_s < 0)
    throw config_error("run.heartbeat_duration_s: must be >= 0");
  for (const auto& b : backends) {
    try {
      b.config.validate(cluster);
    } catch (const config_error& e) {
      throw config_error("backend." + b.name + ": " + e.what());
    }
  }
  for (const auto& w : workloads) {
    if (w.trace)
      continue;
    try {
      w.spec.validate();
    } catch (const config_error& e) {
      throw config_error("workload." + w.name + ": " + e.what());
    }
  }
  if (failure) {
    if (failure->osd >= cluster.total_osds())
      throw config_error("failure.osd: no such OSD");
    if (!(failure->at >= 0.0 && failure->at <= 1.0))
      throw config_error("failure.at: must be in [0,1]");
    if (!(failure->repair_at >= failure->at && failure->repair_at <= 1.0))
      throw config_error("failure.repair_at: must be in [failure.at, 1]");
  }
}

ExperimentConfig parse_config(std::istream& is,
                              const std::vector<std::string>& overrides,
                              const std::filesystem::path& base_dir)
{
  auto sections = read_sections(is);
  for (const auto& o : overrides)
    apply_override(sections, o);

  ExperimentConfig cfg;
  // [run] first: workload seeds default to the run seed.
  std::map<std::string, int> seen;
  for (const auto& s : sections)
    if (++seen[s.name] > 1)
      throw config_error(s.name + ": section appears twice");
  for (const auto& s : sections) {
    if (s.name != "run")
      continue;
    Fields f(s);
    cfg.seed = f.size("seed", cfg.seed);
    cfg.output_dir = f.str("output_dir", cfg.output_dir.string());
    cfg.queue_depth = f.size("queue_depth", cfg.queue_depth);
    cfg.heartbeat_duration_s = f.real("heartbeat_duration_s", cfg.heartbeat_duration_s);
    cfg.heartbeat_msg_bytes = f.size("heartbeat_msg_bytes", cfg.heartbeat_msg_bytes);
    cfg.include_heartbeat = f.flag("include_heartbeat", cfg.include_heartbeat);
    cfg.verify_payload = f.flag("verify_payload", cfg.verify_payload);
    cfg.gnuplot = f.flag("gnuplot", cfg.gnuplot);
    cfg.threads = f.size("threads", cfg.threads);
    f.finish();
  }

  for (const auto& s : sections) {
    Fields f(s);
    if (s.name == "run") {
      continue;
    } else if (s.name == "cluster") {
      auto& c = cfg.cluster;
      c.node_count = f.size("node_count", c.node_count);
      c.osds_per_node = f.size("osds_per_node", c.osds_per_node);
      c.pg_count_data = f.size("pg_count_data", c.pg_count_data);
      c.pg_count_meta = f.size("pg_count_meta", c.pg_count_meta);
      c.placement_seed = f.size("placement_seed", c.placement_seed);
    } else if (s.name.starts_with("backend.")) {
      auto nb = parse_backend(s.name.substr(8), f);
      nb.config.verify_payload = cfg.verify_payload;
      cfg.backends.push_back(std::move(nb));
    } else if (s.name.starts_with("workload.")) {
      cfg.workloads.push_back(parse_workload(s.name.substr(9), f, cfg.seed, base_dir));
    } else if (s.name == "failure") {
      FailureScenario fs;
      if (!f.has("osd"))
        f.fail("osd", "required");
      fs.osd = static_cast<OsdId>(f.size("osd", 0));
      fs.at = f.real("at", fs.at);
      fs.repair_at = f.real("repair_at", fs.at);
      cfg.failure = fs;
    } else {
      throw config_error(s.name + ": unknown section");
    }
    f.finish();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides)
{
  std::ifstream is(path);
  if (!is)
    throw io_error("cannot open config " + path.string());
  return parse_config(is, overrides, path.parent_path());
}

namespace {

std::string num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

} // namespace

void write_manifest(const ExperimentConfig& cfg, std::ostream& os)
{
  char poly[16];
  std::snprintf(poly, sizeof poly, "0x%X", gf256::kPolynomial);
  os << "# ecsim resolved configuration\n"
     << "# gf_polynomial = " << poly << "\n"
     << "# gf_generator = " << gf256::kGenerator << "\n"
     << "# gf_word_bits = " << gf256::kWordBits << "\n"
     << "# heartbeat_interval_s = " << num(kHeartbeatIntervalSeconds) << "\n\n";

  os << "[run]\n"
     << "seed = " << cfg.seed << "\n"
     << "output_dir = " << cfg.output_dir.string() << "\n"
     << "queue_depth = " << cfg.queue_depth << "\n"
     << "heartbeat_duration_s = " << num(cfg.heartbeat_duration_s) << "\n"
     << "heartbeat_msg_bytes = " << cfg.heartbeat_msg_bytes << "\n"
     << "include_heartbeat = " << (cfg.include_heartbeat ? "true" : "false") << "\n"
     << "verify_payload = " << (cfg.verify_payload ? "true" : "false") << "\n"
     << "gnuplot = " << (cfg.gnuplot ? "true" : "false") << "\n\n";

  const auto& c = cfg.cluster;
  os << "[cluster]\n"
     << "node_count = " << c.node_count << "\n"
     << "osds_per_node = " << c.osds_per_node << "\n"
     << "pg_count_data = " << c.pg_count_data << "\n"
     << "pg_count_meta = " << c.pg_count_meta << "\n"
     << "placement_seed = " << c.placement_seed << "\n\n";

  for (const auto& b : cfg.backends) {
    const auto& bc = b.config;
    os << "[backend." << b.name << "]\n";
    if (bc.is_erasure()) {
      os << "type = erasure\n"
         << "k = " << bc.code().k << "\n"
         << "m = " << bc.code().m << "\n"
         << "chunk_bytes = " << bc.code().chunk_bytes << "\n";
    } else {
      os << "type = replication\n"
         << "copies = " << bc.copies() << "\n";
    }
    const std::size_t pgs = c.pg_count_data ? c.pg_count_data : bc.default_pg_count();
    os << "object_bytes = " << bc.object_bytes << "\n"
       << "min_io_bytes = " << bc.min_io_bytes << "\n"
       << "net_boundary = " << (bc.net_boundary == NetBoundary::node ? "node" : "osd") << "\n"
       << "# pg_count = " << pgs << "\n\n";
  }

  for (const auto& w : cfg.workloads) {
    os << "[workload." << w.name << "]\n";
    if (w.trace) {
      os << "trace = " << w.trace->string() << "\n";
    } else {
      for (const auto& s : w.spec.streams)
        os << "# stream " << s.label << ": share=" << num(s.share)
           << " metadata=" << num(s.metadata_fraction)
           << " read=" << num(s.read_fraction)
           << " random=" << num(s.random_fraction)
           << " block=" << s.block.major() << "\n";
      if (!w.block_sizes.empty()) {
        os << "block_bytes = ";
        for (std::size_t i = 0; i < w.block_sizes.size(); ++i)
          os << (i ? ", " : "") << w.block_sizes[i];
        os << "\n";
      }
      os << "total_bytes = " << w.spec.total_bytes << "\n";
    }
    os << "file_bytes = " << w.spec.file_bytes << "\n"
       << "seed = " << w.spec.seed << "\n"
       << "prefill = " << (w.spec.prefill ? "true" : "false") << "\n\n";
  }

  if (cfg.failure)
    os << "[failure]\n"
       << "osd = " << cfg.failure->osd << "\n"
       << "at = " << num(cfg.failure->at) << "\n"
       << "repair_at = " << num(cfg.failure->repair_at) << "\n";
}

// --- running ----------------------------------------------------------------

namespace {

constexpr std::uint64_t kMaxVerifyFileBytes = 1ull << 30;

struct CellRequest {
  IoRequest io;
  bool metadata = false;
};

void fill_payload(std::uint64_t seed, std::uint64_t index,
                  std::vector<std::uint8_t>& buf)
{
  std::mt19937_64 rng(mix64(seed) ^ mix64(index + 1));
  for (std::size_t i = 0; i < buf.size(); i += 8) {
    std::uint64_t v = rng();
    for (std::size_t b = 0; b < 8 && i + b < buf.size(); ++b, v >>= 8)
      buf[i + b] = static_cast<std::uint8_t>(v);
  }
}

} // namespace

CellResult run_cell(const ExperimentConfig& cfg, const NamedBackend& nb,
                    const WorkloadEntry& w, std::uint64_t block_bytes)
{
  CellResult res;
  auto& row = res.row;
  row.backend = nb.name;
  row.workload = w.name;
  row.block_bytes = block_bytes;
  if (nb.config.is_erasure()) {
    row.k = nb.config.code().k;
    row.m = nb.config.code().m;
  } else {
    row.r = nb.config.copies();
  }

  WorkloadSpec spec = w.spec;
  std::vector<CellRequest> requests;
  if (w.trace) {
    row.pattern = "trace";
    for (const auto& r : trace_requests(parse_trace_file(*w.trace), spec.file_bytes))
      requests.push_back({r, false});
  } else {
    if (!w.block_sizes.empty())
      for (auto& s : spec.streams)
        s.block = BlockSizeDist::fixed(block_bytes);
    row.pattern = spec.pattern_label();
    for (const auto& r : generate(spec))
      requests.push_back({r.io, r.metadata});
  }

  BackendConfig bc = nb.config;
  bc.verify_payload = cfg.verify_payload;
  if (bc.verify_payload && spec.file_bytes > kMaxVerifyFileBytes)
    throw config_error("workload." + w.name +
                       ".file_bytes: too large for run.verify_payload (max 1GiB)");
  PgBackend backend(bc, cfg.cluster);
  if (spec.prefill)
    backend.prefill(spec.file_bytes);

  std::vector<std::uint8_t> shadow(bc.verify_payload ? spec.file_bytes : 0);
  std::vector<std::uint8_t> payload;
  std::vector<std::uint8_t> readback;

  const std::size_t n = requests.size();
  std::size_t fail_idx = n + 1, repair_idx = n + 1;
  if (cfg.failure) {
    fail_idx = static_cast<std::size_t>(cfg.failure->at * static_cast<double>(n));
    repair_idx = static_cast<std::size_t>(cfg.failure->repair_at * static_cast<double>(n));
  }
  bool failed = false, repaired = false;
  const auto do_fail = [&] {
    backend.fail_osd(cfg.failure->osd);
    failed = true;
  };
  const auto do_repair = [&] {
    RepairResult rr;
    rr.backend = nb.name;
    rr.workload = w.name;
    rr.block_bytes = block_bytes;
    rr.osd = cfg.failure->osd;
    rr.k = row.k;
    rr.failed_bytes = backend.bytes_on_osd(cfg.failure->osd);
    const IoEffects fx = backend.repair_osd(cfg.failure->osd);
    rr.repair_read_bytes = fx.storage_read_bytes();
    rr.repair_write_bytes = fx.storage_write_bytes();
    rr.repair_net_bytes = fx.private_net_bytes;
    res.repair = rr;
    repaired = true;
  };

  try {
    for (std::size_t i = 0; i < n; ++i) {
      if (i % cfg.queue_depth == 0)
        backend.begin_batch();
      if (cfg.failure && !failed && i >= fail_idx)
        do_fail();
      if (cfg.failure && failed && !repaired && i >= repair_idx)
        do_repair();

      const auto& r = requests[i];
      if (r.metadata) {
        ++res.metadata_requests;
        continue;
      }
      IoEffects fx;
      if (r.io.op == IoOp::write) {
        if (bc.verify_payload) {
          payload.resize(r.io.length);
          fill_payload(spec.seed, i, payload);
          std::copy(payload.begin(), payload.end(),
                    shadow.begin() + r.io.file_offset);
        }
        fx = backend.submit(r.io, payload);
      } else {
        fx = backend.submit(r.io, {}, bc.verify_payload ? &readback : nullptr);
        if (bc.verify_payload &&
            !std::equal(readback.begin(), readback.end(),
                        shadow.begin() + r.io.file_offset))
          ++res.verify_mismatches;
      }
      row.counters = accumulate(row.counters, fx);
    }
    if (cfg.failure && !failed)
      do_fail();
    if (cfg.failure && !repaired)
      do_repair();
  } catch (const data_loss_error& e) {
    res.data_loss = e.what();
  }

  res.heartbeat_bytes =
    heartbeat_traffic(cfg.cluster, cfg.heartbeat_duration_s, cfg.heartbeat_msg_bytes);
  if (cfg.include_heartbeat)
    row.counters.private_net_bytes += res.heartbeat_bytes;
  return res;
}

namespace {

struct CellSpec {
  const NamedBackend* backend;
  const WorkloadEntry* workload;
  std::uint64_t block;
};

void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body)
{
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
      throw io_error("cannot open " + tmp.string() + " for writing");
    body(os);
    os.flush();
    if (!os)
      throw io_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw io_error("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string group_key(const ReportRow& r)
{
  return r.workload + '\x1f' + r.pattern + '\x1f' + std::to_string(r.block_bytes);
}

std::vector<std::vector<ReportRow>> group_rows(const std::vector<ReportRow>& rows)
{
  std::vector<std::vector<ReportRow>> groups;
  std::map<std::string, std::size_t> where;
  for (const auto& r : rows) {
    auto [it, inserted] = where.try_emplace(group_key(r), groups.size());
    if (inserted)
      groups.emplace_back();
    groups[it->second].push_back(r);
  }
  return groups;
}

void write_summary(const ExperimentConfig& cfg, const RunResult& res,
                   std::ostream& os)
{
  os << "ecsim summary\n\n";
  for (const auto& group : group_rows(res.report.rows)) {
    const auto& first = group.front();
    os << "workload " << first.workload << " (" << first.pattern << ", "
       << first.block_bytes << " B)\n";
    os << "  " << std::left << std::setw(16) << "backend" << std::right
       << std::setw(14) << "read_amp" << std::setw(14) << "write_amp"
       << std::setw(14) << "rel_net" << std::setw(14) << "pg_conflicts" << "\n";
    for (const auto& r : group) {
      const auto cell = [](const std::optional<double>& v) {
        return v ? format_ratio(v) : std::string("-");
      };
      os << "  " << std::left << std::setw(16) << r.backend << std::right
         << std::setw(14) << cell(r.read_amp()) << std::setw(14)
         << cell(r.write_amp()) << std::setw(14) << cell(r.rel_net_traffic())
         << std::setw(14) << r.counters.pg_conflict_count << "\n";
    }
    if (group.size() >= 2)
      print_comparison(compare(group), os);
    os << "\n";
  }

  for (const auto& c : res.cells) {
    if (c.metadata_requests)
      os << "metadata-path requests skipped: " << c.row.backend << " / "
         << c.row.workload << ": " << c.metadata_requests << "\n";
    if (c.verify_mismatches)
      os << "PAYLOAD MISMATCH: " << c.row.backend << " / " << c.row.workload
         << ": " << c.verify_mismatches << " reads differ\n";
    if (c.data_loss)
      os << "DATA LOSS: " << c.row.backend << " / " << c.row.workload << ": "
         << *c.data_loss << "\n";
    if (c.repair) {
      const auto& r = *c.repair;
      os << "repair: " << r.backend << " / " << r.workload << " (" << r.block_bytes
         << " B): osd " << r.osd << " held " << r.failed_bytes << " B; read "
         << r.repair_read_bytes << " B";
      if (r.k)
        os << " (k x held = " << r.k * r.failed_bytes << " B)";
      os << ", wrote " << r.repair_write_bytes << " B, private net "
         << r.repair_net_bytes << " B\n";
      if (r.k)
        os << "  note: decoding pulls k chunks per lost chunk; the often "
              "quoted k-1 estimate would give "
           << (r.k - 1) * r.failed_bytes << " B and differs from this figure\n";
    }
  }

  const std::uint64_t hb =
    heartbeat_traffic(cfg.cluster, cfg.heartbeat_duration_s, cfg.heartbeat_msg_bytes);
  os << "heartbeat: " << cfg.cluster.total_osds() << " OSDs, "
     << num(cfg.heartbeat_duration_s) << " s -> " << hb << " B ("
     << (cfg.include_heartbeat ? "included in" : "excluded from")
     << " rel_net_traffic)\n";
}

void write_repair_csv(const RunResult& res, std::ostream& os)
{
  os << "backend,workload,block_bytes,osd,k,failed_bytes,repair_read_bytes,"
        "repair_write_bytes,repair_net_bytes\n";
  for (const auto& c : res.cells)
    if (c.repair) {
      const auto& r = *c.repair;
      os << r.backend << ',' << r.workload << ',' << r.block_bytes << ','
         << r.osd << ',' << r.k << ',' << r.failed_bytes << ','
         << r.repair_read_bytes << ',' << r.repair_write_bytes << ','
         << r.repair_net_bytes << '\n';
    }
}

void write_gnuplot(const RunResult& res, std::ostream& os)
{
  // One block per (backend, workload), separated by two blank lines so
  // gnuplot can address them with `index`.
  os << "# block_bytes read_amp write_amp rel_net_traffic\n";
  std::map<std::string, std::vector<const ReportRow*>> series;
  std::vector<std::string> order;
  for (const auto& r : res.report.rows) {
    const std::string key = r.backend + " " + r.workload;
    if (!series.contains(key))
      order.push_back(key);
    series[key].push_back(&r);
  }
  for (const auto& key : order) {
    os << "# " << key << "\n";
    for (const ReportRow* r : series[key]) {
      const auto cell = [](const std::optional<double>& v) {
        return v ? format_ratio(v) : std::string("NaN");
      };
      os << r->block_bytes << ' ' << cell(r->read_amp()) << ' '
         << cell(r->write_amp()) << ' ' << cell(r->rel_net_traffic()) << "\n";
    }
    os << "\n\n";
  }
}

} // namespace

RunResult run(const ExperimentConfig& cfg)
{
  cfg.validate();
  std::vector<CellSpec> specs;
  for (const auto& w : cfg.workloads) {
    std::vector<std::uint64_t> blocks = w.block_sizes;
    if (blocks.empty())
      blocks.push_back(w.trace ? 0 : w.spec.major_block());
    for (auto b : blocks)
      for (const auto& nb : cfg.backends)
        specs.push_back({&nb, &w, b});
  }

  RunResult res;
  res.cells.resize(specs.size());
  std::size_t workers = cfg.threads ? cfg.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, specs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < specs.size();)
        res.cells[i] = run_cell(cfg, *specs[i].backend, *specs[i].workload,
                                specs[i].block);
    }));
  for (auto& f : pool)
    f.get();

  for (const auto& c : res.cells) {
    res.report.rows.push_back(c.row);
    if (c.data_loss || c.verify_mismatches)
      res.status = exit_data_loss;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec)
    throw io_error("cannot create " + cfg.output_dir.string() + ": " + ec.message());
  write_atomically(cfg.output_dir / "results.csv",
                   [&](std::ostream& os) { write_csv(res.report, os); });
  write_atomically(cfg.output_dir / "manifest.txt",
                   [&](std::ostream& os) { write_manifest(cfg, os); });
  write_atomically(cfg.output_dir / "summary.txt",
                   [&](std::ostream& os) { write_summary(cfg, res, os); });
  if (cfg.failure)
    write_atomically(cfg.output_dir / "repair.csv",
                     [&](std::ostream& os) { write_repair_csv(res, os); });
  if (cfg.gnuplot)
    write_atomically(cfg.output_dir / "results.dat",
                     [&](std::ostream& os) { write_gnuplot(res, os); });
  return res;
}

// --- comparison -------------------------------------------------------------

namespace {

std::optional<double> over(const std::optional<double>& a,
                           const std::optional<double>& b)
{
  if (!a || !b || *b == 0.0)
    return std::nullopt;
  return *a / *b;
}

} // namespace

Comparison compare(const std::vector<ReportRow>& reports)
{
  if (reports.size() < 2)
    throw config_error("compare: at least two reports are required");
  const auto key = group_key(reports.front());
  for (const auto& r : reports)
    if (group_key(r) != key)
      throw config_error("compare: reports cover different workloads (" +
                         reports.front().workload + " vs " + r.workload + ")");

  const auto base_it = std::find_if(reports.begin(), reports.end(),
                                    [](const ReportRow& r) { return r.r > 0; });
  const ReportRow& base = base_it != reports.end() ? *base_it : reports.front();

  Comparison c;
  c.workload = base.workload;
  c.pattern = base.pattern;
  c.block_bytes = base.block_bytes;
  c.baseline = base.backend;
  for (const auto& r : reports) {
    if (&r == &base)
      continue;
    c.lines.push_back({r.backend, over(r.read_amp(), base.read_amp()),
                       over(r.write_amp(), base.write_amp()),
                       over(r.rel_net_traffic(), base.rel_net_traffic())});
  }
  return c;
}

std::vector<Comparison> compare_all(const std::vector<ReportRow>& rows)
{
  if (rows.size() < 2)
    throw config_error("compare: at least two reports are required");
  std::vector<Comparison> out;
  for (const auto& g : group_rows(rows)) {
    if (g.size() < 2)
      throw config_error("compare: workload " + g.front().workload + " (" +
                         std::to_string(g.front().block_bytes) +
                         " B) has no counterpart to compare against");
    out.push_back(compare(g));
  }
  return out;
}

void print_comparison(const Comparison& c, std::ostream& os)
{
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_ratio(v) : std::string("-");
  };
  os << "  ratio to " << c.baseline << ":\n";
  for (const auto& l : c.lines)
    os << "  " << std::left << std::setw(16) << l.backend << std::right
       << std::setw(14) << cell(l.read_amp) << std::setw(14)
       << cell(l.write_amp) << std::setw(14) << cell(l.rel_net_traffic) << "\n";
}

} // namespace ecsim
