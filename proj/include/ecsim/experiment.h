// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecsim/metrics.h"
#include "ecsim/placement.h"
#include "ecsim/storage_backend.h"
#include "ecsim/workload.h"

namespace ecsim {

// Process exit statuses of the ecsim tool.
enum exit_status : int {
  exit_ok = 0,
  exit_config = 2,
  exit_data_loss = 3,
  exit_io = 4,
};

struct NamedBackend {
  std::string name;
  BackendConfig config;
};

struct WorkloadEntry {
  std::string name;
  WorkloadSpec spec;
  // One grid cell per listed size; empty runs the spec as given.
  std::vector<std::uint64_t> block_sizes;
  std::optional<std::filesystem::path> trace;
};

struct FailureScenario {
  OsdId osd = 0;
  double at = 0.5;        // fraction of the request stream
  double repair_at = 0.5; // >= at; 1.0 repairs after the last request
};

struct ExperimentConfig {
  ClusterMap cluster;
  std::vector<NamedBackend> backends;
  std::vector<WorkloadEntry> workloads;
  std::filesystem::path output_dir = "ecsim-out";
  std::uint64_t seed = 1;
  std::optional<FailureScenario> failure;
  std::size_t queue_depth = 256;
  double heartbeat_duration_s = 0.0;
  std::uint64_t heartbeat_msg_bytes = kDefaultHeartbeatMessageBytes;
  bool include_heartbeat = false;
  bool verify_payload = false;
  bool gnuplot = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Throws config_error naming the field at fault.
  void validate() const;
};

/**
 * Parses the sectioned key=value format. `overrides` holds
 * "section.key=value" strings applied on top of the file. Relative trace
 * paths resolve against `base_dir`; output_dir stays relative to the
 * working directory.
 */
ExperimentConfig parse_config(std::istream& is,
                              const std::vector<std::string>& overrides = {},
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

/// Resolved configuration in the input format, plus derived constants.
void write_manifest(const ExperimentConfig& cfg, std::ostream& os);

struct RepairResult {
  std::string backend;
  std::string workload;
  std::uint64_t block_bytes = 0;
  OsdId osd = 0;
  std::size_t k = 0;
  std::uint64_t failed_bytes = 0;
  std::uint64_t repair_read_bytes = 0;
  std::uint64_t repair_write_bytes = 0;
  std::uint64_t repair_net_bytes = 0;
};

struct CellResult {
  ReportRow row;
  std::optional<RepairResult> repair;
  std::uint64_t heartbeat_bytes = 0;
  std::uint64_t metadata_requests = 0;
  std::uint64_t verify_mismatches = 0;
  std::optional<std::string> data_loss;
};

struct RunResult {
  std::vector<CellResult> cells;
  AmplificationReport report;
  int status = exit_ok;
};

/// One (backend, workload, block) cell. Throws on configuration errors.
CellResult run_cell(const ExperimentConfig& cfg, const NamedBackend& backend,
                    const WorkloadEntry& workload, std::uint64_t block_bytes);

/**
 * Runs the full grid and writes results.csv, manifest.txt, summary.txt,
 * repair.csv (with a failure scenario) and results.dat (gnuplot) into
 * output_dir. Each file is written to a temporary name and renamed.
 */
RunResult run(const ExperimentConfig& cfg);

struct ComparisonLine {
  std::string backend;
  std::optional<double> read_amp;
  std::optional<double> write_amp;
  std::optional<double> rel_net_traffic;
};

struct Comparison {
  std::string workload;
  std::string pattern;
  std::uint64_t block_bytes = 0;
  std::string baseline;
  std::vector<ComparisonLine> lines;  // metric / baseline metric
};

/**
 * Ratios of each report to a baseline: the first replicated backend, or
 * the first report when none is replicated. Needs at least two reports of
 * one workload; throws config_error otherwise.
 */
Comparison compare(const std::vector<ReportRow>& reports);

/// Groups rows by (workload, pattern, block) and compares each group.
std::vector<Comparison> compare_all(const std::vector<ReportRow>& rows);

void print_comparison(const Comparison& c, std::ostream& os);

/// Parses sizes such as 4096, 4K, 4KiB, 1M, 1T (binary multiples).
std::uint64_t parse_size(const std::string& text);

} // namespace ecsim
