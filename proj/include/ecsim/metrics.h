// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecsim/storage_backend.h"

namespace ecsim {

struct Counters {
  std::uint64_t client_read_bytes = 0;
  std::uint64_t client_write_bytes = 0;
  std::uint64_t storage_read_bytes = 0;
  std::uint64_t storage_write_bytes = 0;
  std::uint64_t private_net_bytes = 0;
  std::uint64_t public_net_bytes = 0;
  std::uint64_t request_count = 0;
  std::uint64_t pg_conflict_count = 0;

  Counters& operator+=(const Counters& rhs);
  bool operator==(const Counters&) const = default;
};

Counters operator+(Counters lhs, const Counters& rhs);

Counters accumulate(Counters c, const IoEffects& e);

/**
 * Storage reads over requested reads. A workload that requested no reads
 * is normalized by its requested writes instead, so reads induced by
 * writes still report an amplification. Empty when both are zero.
 */
std::optional<double> read_amp(const Counters& c);

/// Mirror of read_amp over storage writes.
std::optional<double> write_amp(const Counters& c);

/// Private network bytes over all client-requested bytes.
std::optional<double> rel_net_traffic(const Counters& c);

/// One (backend, workload, block size) cell.
struct ReportRow {
  std::string backend;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  std::string workload;
  std::string pattern;
  std::uint64_t block_bytes = 0;
  Counters counters;

  std::optional<double> read_amp() const { return ecsim::read_amp(counters); }
  std::optional<double> write_amp() const { return ecsim::write_amp(counters); }
  std::optional<double> rel_net_traffic() const {
    return ecsim::rel_net_traffic(counters);
  }
};

struct AmplificationReport {
  std::vector<ReportRow> rows;
};

inline constexpr const char* kCsvHeader =
  "backend,k,m,r,workload,pattern,block_bytes,client_read_bytes,"
  "client_write_bytes,storage_read_bytes,storage_write_bytes,"
  "private_net_bytes,public_net_bytes,read_amp,write_amp,rel_net_traffic,"
  "pg_conflicts";

void write_csv(const AmplificationReport& report, std::ostream& os);

/// Throws io_error when the file cannot be written.
void export_csv(const AmplificationReport& report,
                const std::filesystem::path& destination);

/// Parses a file produced by export_csv. Throws parse_error.
AmplificationReport read_csv(std::istream& is);
AmplificationReport import_csv(const std::filesystem::path& source);

/// Six-decimal rendering; empty for an absent ratio.
std::string format_ratio(const std::optional<double>& v);

} // namespace ecsim
