// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/workload.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "ecsim/errors.h"

namespace ecsim {

double uniform01(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BlockSizeDist::BlockSizeDist(std::vector<std::pair<std::uint64_t, double>> entries)
  : entries_(std::move(entries))
{
  double sum = 0;
  for (const auto& [bytes, w] : entries_) {
    if (bytes == 0)
      throw config_error("block size must be >= 1");
    if (!(w > 0))
      throw config_error("block size weights must be > 0");
    sum += w;
  }
  double acc = 0;
  for (const auto& e : entries_) {
    acc += e.second / sum;
    cumulative_.push_back(acc);
  }
}

std::uint64_t BlockSizeDist::major() const
{
  if (entries_.empty())
    return 0;
  return std::max_element(entries_.begin(), entries_.end(),
                          [](const auto& a, const auto& b) {
                            return a.second < b.second;
                          })->first;
}

std::uint64_t BlockSizeDist::max() const
{
  std::uint64_t m = 0;
  for (const auto& e : entries_)
    m = std::max(m, e.first);
  return m;
}

std::uint64_t BlockSizeDist::draw(std::mt19937_64& rng) const
{
  if (entries_.size() == 1)
    return entries_.front().first;
  const double u = uniform01(rng);
  for (std::size_t i = 0; i < cumulative_.size(); ++i)
    if (u < cumulative_[i])
      return entries_[i].first;
  return entries_.back().first;
}

WorkloadSpec WorkloadSpec::synthetic(std::string name, AccessPattern pattern,
                                     double read_fraction,
                                     std::uint64_t block_bytes,
                                     std::uint64_t total_bytes,
                                     std::uint64_t file_bytes, std::uint64_t seed)
{
  WorkloadSpec w;
  w.name = std::move(name);
  StreamMix s;
  s.label = "main";
  s.read_fraction = read_fraction;
  s.random_fraction = pattern == AccessPattern::random ? 1.0 : 0.0;
  s.block = BlockSizeDist::fixed(block_bytes);
  w.streams.push_back(std::move(s));
  w.total_bytes = total_bytes;
  w.file_bytes = file_bytes;
  w.seed = seed;
  return w;
}

std::string WorkloadSpec::pattern_label() const
{
  bool all_seq = true, all_rand = true;
  for (const auto& s : streams) {
    all_seq = all_seq && s.random_fraction == 0.0;
    all_rand = all_rand && s.random_fraction == 1.0;
  }
  if (all_seq)
    return "sequential";
  if (all_rand)
    return "random";
  return "mixed";
}

std::uint64_t WorkloadSpec::major_block() const
{
  if (streams.empty())
    return 0;
  const auto it = std::max_element(
    streams.begin(), streams.end(),
    [](const StreamMix& a, const StreamMix& b) { return a.share < b.share; });
  return it->block.major();
}

void WorkloadSpec::validate() const
{
  const auto fraction = [this](double v, const std::string& field) {
    if (!(v >= 0.0 && v <= 1.0))
      throw config_error("workload " + name + ": " + field + " must be in [0,1]");
  };
  if (streams.empty())
    throw config_error("workload " + name + ": no streams");
  for (const auto& s : streams) {
    if (!(s.share > 0))
      throw config_error("workload " + name + ": share must be > 0");
    fraction(s.metadata_fraction, "metadata_fraction");
    fraction(s.read_fraction, "read_fraction");
    fraction(s.random_fraction, "random_fraction");
    if (s.block.entries().empty())
      throw config_error("workload " + name + ": block_bytes missing");
    if (s.block.max() > file_bytes)
      throw config_error("workload " + name + ": block_bytes exceeds file_bytes");
    if (total_bytes < s.block.max())
      throw config_error("workload " + name + ": total_bytes must be >= block_bytes");
  }
}

std::vector<WorkloadRequest> generate(const WorkloadSpec& spec)
{
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  std::vector<double> cumulative;
  double total_share = 0;
  for (const auto& s : spec.streams)
    total_share += s.share;
  double acc = 0;
  for (const auto& s : spec.streams) {
    acc += s.share / total_share;
    cumulative.push_back(acc);
  }

  // Sequential cursors start at evenly spaced regions of the file.
  std::vector<std::uint64_t> cursor(spec.streams.size());
  for (std::size_t i = 0; i < cursor.size(); ++i)
    cursor[i] = spec.file_bytes / cursor.size() * i / 4096 * 4096;

  std::vector<WorkloadRequest> out;
  std::uint64_t issued = 0;
  while (issued < spec.total_bytes) {
    std::size_t si = 0;
    if (spec.streams.size() > 1) {
      const double u = uniform01(rng);
      while (si + 1 < cumulative.size() && u >= cumulative[si])
        ++si;
    }
    const StreamMix& s = spec.streams[si];
    WorkloadRequest r;
    r.stream = si;
    r.metadata = uniform01(rng) < s.metadata_fraction;
    r.io.op = uniform01(rng) < s.read_fraction ? IoOp::read : IoOp::write;
    const bool random = uniform01(rng) < s.random_fraction;
    const std::uint64_t len = s.block.draw(rng);
    r.io.length = len;
    if (random) {
      const std::uint64_t blocks = spec.file_bytes / len;
      r.io.file_offset = (rng() % blocks) * len;
    } else {
      if (cursor[si] + len > spec.file_bytes)
        cursor[si] = 0;
      r.io.file_offset = cursor[si];
      cursor[si] += len;
    }
    issued += len;
    out.push_back(r);
  }
  return out;
}

namespace {

StreamMix stream(std::string label, double share, double metadata, double read,
                 double random, std::uint64_t block)
{
  return StreamMix{std::move(label), share, metadata, read, random,
                   BlockSizeDist::fixed(block)};
}

} // namespace

WorkloadSpec preset(std::string_view name)
{
  WorkloadSpec w;
  w.name = std::string(name);
  w.total_bytes = 1ull << 30;
  if (name == "db") {
    w.streams = {stream("table", 0.833, 0.0, 0.80, 0.99, 8 << 10),
                 stream("log", 0.167, 0.0, 1.00, 0.20, 8 << 10)};
  } else if (name == "vdi") {
    w.streams = {stream("vdi", 1.0, 0.01, 0.263, 0.848, 4 << 10)};
  } else if (name == "eda") {
    w.streams = {stream("frontend", 0.66, 0.60, 0.375, 0.575, 64 << 10),
                 stream("backend", 0.33, 0.0, 0.50, 0.0, 64 << 10)};
  } else if (name == "vda") {
    w.streams = {stream("data_stream", 0.90, 0.0, 0.0, 0.0, 512 << 10),
                 stream("companion", 0.10, 0.09, 0.989, 0.945, 512 << 10)};
  } else {
    throw config_error("unknown workload preset '" + std::string(name) + "'");
  }
  return w;
}

namespace {

std::string trim(std::string s)
{
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* what)
{
  if (!s.empty() && s[0] == '-')
    throw parse_error(line, std::string(what) + " must not be negative");
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw parse_error(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

} // namespace

std::vector<TraceRecord> parse_trace(std::istream& is)
{
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#')
      continue;
    if (out.empty() && line.rfind("timestamp", 0) == 0)
      continue;

    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
      f.push_back(trim(field));
    if (f.size() != 4)
      throw parse_error(lineno, "expected timestamp,op,offset,length");

    TraceRecord r;
    r.line = lineno;
    try {
      std::size_t used = 0;
      r.timestamp = std::stod(f[0], &used);
      if (used != f[0].size())
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw parse_error(lineno, "bad timestamp '" + f[0] + "'");
    }
    if (r.timestamp < 0)
      throw parse_error(lineno, "timestamp must not be negative");

    std::string op = f[1];
    std::transform(op.begin(), op.end(), op.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (op == "r" || op == "read")
      r.op = IoOp::read;
    else if (op == "w" || op == "write")
      r.op = IoOp::write;
    else
      throw parse_error(lineno, "bad op '" + f[1] + "'");

    r.offset = parse_u64(f[2], lineno, "offset");
    r.length = parse_u64(f[3], lineno, "length");
    if (r.length == 0)
      throw parse_error(lineno, "length must be >= 1");
    out.push_back(r);
  }
  return out;
}

std::vector<TraceRecord> parse_trace_file(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is)
    throw io_error("cannot open trace " + path.string());
  return parse_trace(is);
}

std::vector<IoRequest> trace_requests(const std::vector<TraceRecord>& records,
                                      std::uint64_t file_bytes)
{
  std::vector<IoRequest> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.offset > file_bytes || r.length > file_bytes - r.offset)
      throw parse_error(r.line, "request reaches past file_bytes");
    out.push_back({r.op, r.offset, r.length});
  }
  return out;
}

} // namespace ecsim
