// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsim/storage_backend.h"

namespace ecsim {

inline constexpr std::uint64_t kDefaultFileBytes = 1ull << 40;

enum class AccessPattern { sequential, random };

/// Request-size distribution: weighted point masses.
class BlockSizeDist {
public:
  BlockSizeDist() = default;
  explicit BlockSizeDist(std::vector<std::pair<std::uint64_t, double>> entries);
  static BlockSizeDist fixed(std::uint64_t bytes) { return BlockSizeDist({{bytes, 1.0}}); }

  // Heaviest entry; first one on ties.
  std::uint64_t major() const;
  std::uint64_t max() const;
  std::uint64_t draw(std::mt19937_64& rng) const;
  const std::vector<std::pair<std::uint64_t, double>>& entries() const {
    return entries_;
  }

private:
  std::vector<std::pair<std::uint64_t, double>> entries_;
  std::vector<double> cumulative_;
};

/// One class of process in a workload (e.g. the table process of DB).
struct StreamMix {
  std::string label;
  double share = 1.0;
  double metadata_fraction = 0.0;
  double read_fraction = 0.0;
  double random_fraction = 0.0;
  BlockSizeDist block = BlockSizeDist::fixed(4096);
};

struct WorkloadSpec {
  std::string name;
  std::vector<StreamMix> streams;
  std::uint64_t total_bytes = 0;
  std::uint64_t file_bytes = kDefaultFileBytes;
  std::uint64_t seed = 0;
  bool prefill = true;

  /// FIO-style single-stream workload.
  static WorkloadSpec synthetic(std::string name, AccessPattern pattern,
                                double read_fraction, std::uint64_t block_bytes,
                                std::uint64_t total_bytes,
                                std::uint64_t file_bytes = kDefaultFileBytes,
                                std::uint64_t seed = 0);

  /// "sequential", "random", or "mixed".
  std::string pattern_label() const;
  /// Major block size of the heaviest stream.
  std::uint64_t major_block() const;

  /// Throws config_error naming the offending field.
  void validate() const;
};

struct WorkloadRequest {
  IoRequest io;
  std::size_t stream = 0;
  // Metadata-path requests never reach the data pool.
  bool metadata = false;
};

/// Deterministic for a fixed spec (including seed).
std::vector<WorkloadRequest> generate(const WorkloadSpec& spec);

/// db, vdi, eda or vda. Throws config_error for anything else.
WorkloadSpec preset(std::string_view name);

struct TraceRecord {
  double timestamp = 0.0;
  IoOp op = IoOp::read;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::size_t line = 0;
};

/**
 * Replay format, one request per line: `timestamp,op,offset,length` with
 * op one of R, W, read, write (any case). Blank lines and lines starting
 * with '#' are skipped, as is a leading header row. Throws parse_error
 * naming the line.
 */
std::vector<TraceRecord> parse_trace(std::istream& is);
std::vector<TraceRecord> parse_trace_file(const std::filesystem::path& path);

/// Throws parse_error for the first record reaching past file_bytes.
std::vector<IoRequest> trace_requests(const std::vector<TraceRecord>& records,
                                      std::uint64_t file_bytes);

/// Uniform double in [0, 1) from 53 high bits; portable across libraries.
double uniform01(std::mt19937_64& rng);

} // namespace ecsim
