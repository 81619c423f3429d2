// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include "ecsim/metrics.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ecsim/errors.h"

namespace ecsim {

Counters& Counters::operator+=(const Counters& rhs)
{
  client_read_bytes += rhs.client_read_bytes;
  client_write_bytes += rhs.client_write_bytes;
  storage_read_bytes += rhs.storage_read_bytes;
  storage_write_bytes += rhs.storage_write_bytes;
  private_net_bytes += rhs.private_net_bytes;
  public_net_bytes += rhs.public_net_bytes;
  request_count += rhs.request_count;
  pg_conflict_count += rhs.pg_conflict_count;
  return *this;
}

Counters operator+(Counters lhs, const Counters& rhs)
{
  return lhs += rhs;
}

Counters accumulate(Counters c, const IoEffects& e)
{
  c.client_read_bytes += e.client_read_bytes;
  c.client_write_bytes += e.client_write_bytes;
  c.storage_read_bytes += e.storage_read_bytes();
  c.storage_write_bytes += e.storage_write_bytes();
  c.private_net_bytes += e.private_net_bytes;
  c.public_net_bytes += e.public_net_bytes;
  c.request_count += e.requests;
  c.pg_conflict_count += e.pg_conflict ? 1 : 0;
  return c;
}

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den)
{
  if (den == 0)
    return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

std::optional<double> read_amp(const Counters& c)
{
  return ratio(c.storage_read_bytes,
               c.client_read_bytes ? c.client_read_bytes : c.client_write_bytes);
}

std::optional<double> write_amp(const Counters& c)
{
  return ratio(c.storage_write_bytes,
               c.client_write_bytes ? c.client_write_bytes : c.client_read_bytes);
}

std::optional<double> rel_net_traffic(const Counters& c)
{
  return ratio(c.private_net_bytes, c.client_read_bytes + c.client_write_bytes);
}

std::string format_ratio(const std::optional<double>& v)
{
  if (!v)
    return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

void write_csv(const AmplificationReport& report, std::ostream& os)
{
  os << kCsvHeader << '\n';
  for (const auto& row : report.rows) {
    const auto& c = row.counters;
    os << row.backend << ',' << row.k << ',' << row.m << ',' << row.r << ','
       << row.workload << ',' << row.pattern << ',' << row.block_bytes << ','
       << c.client_read_bytes << ',' << c.client_write_bytes << ','
       << c.storage_read_bytes << ',' << c.storage_write_bytes << ','
       << c.private_net_bytes << ',' << c.public_net_bytes << ','
       << format_ratio(row.read_amp()) << ','
       << format_ratio(row.write_amp()) << ','
       << format_ratio(row.rel_net_traffic()) << ','
       << c.pg_conflict_count << '\n';
  }
}

void export_csv(const AmplificationReport& report,
                const std::filesystem::path& destination)
{
  std::ofstream os(destination, std::ios::binary | std::ios::trunc);
  if (!os)
    throw io_error("cannot open " + destination.string() + " for writing");
  write_csv(report, os);
  os.flush();
  if (!os)
    throw io_error("failed writing " + destination.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    out.push_back(field);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const char* what)
{
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw parse_error(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

} // namespace

AmplificationReport read_csv(std::istream& is)
{
  AmplificationReport report;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line))
    throw parse_error(1, "missing header");
  ++lineno;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kCsvHeader)
    throw parse_error(lineno, "unexpected header");

  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto f = split_fields(line);
    if (f.size() != 17)
      throw parse_error(lineno, "expected 17 fields, got " +
                                  std::to_string(f.size()));
    ReportRow row;
    row.backend = f[0];
    row.k = parse_number<std::size_t>(f[1], lineno, "k");
    row.m = parse_number<std::size_t>(f[2], lineno, "m");
    row.r = parse_number<std::size_t>(f[3], lineno, "r");
    row.workload = f[4];
    row.pattern = f[5];
    row.block_bytes = parse_number<std::uint64_t>(f[6], lineno, "block_bytes");
    auto& c = row.counters;
    c.client_read_bytes = parse_number<std::uint64_t>(f[7], lineno, "client_read_bytes");
    c.client_write_bytes = parse_number<std::uint64_t>(f[8], lineno, "client_write_bytes");
    c.storage_read_bytes = parse_number<std::uint64_t>(f[9], lineno, "storage_read_bytes");
    c.storage_write_bytes = parse_number<std::uint64_t>(f[10], lineno, "storage_write_bytes");
    c.private_net_bytes = parse_number<std::uint64_t>(f[11], lineno, "private_net_bytes");
    c.public_net_bytes = parse_number<std::uint64_t>(f[12], lineno, "public_net_bytes");
    c.pg_conflict_count = parse_number<std::uint64_t>(f[16], lineno, "pg_conflicts");
    report.rows.push_back(std::move(row));
  }
  return report;
}

AmplificationReport import_csv(const std::filesystem::path& source)
{
  std::ifstream is(source, std::ios::binary);
  if (!is)
    throw io_error("cannot open " + source.string());
  return read_csv(is);
}

} // namespace ecsim
