// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "ecsim/errors.h"
#include "ecsim/metrics.h"

using namespace ecsim;

namespace {

IoEffects effects(std::uint64_t cr, std::uint64_t cw, std::uint64_t sr,
                  std::uint64_t sw, std::uint64_t net)
{
  IoEffects e(4);
  e.client_read_bytes = cr;
  e.client_write_bytes = cw;
  e.add_read(1, sr);
  e.add_write(2, sw);
  e.private_net_bytes = net;
  e.requests = 1;
  return e;
}

ReportRow row(const std::string& backend, std::size_t k, std::size_t m,
              std::size_t r, std::uint64_t block, Counters c)
{
  return ReportRow{backend, k, m, r, "w", "random", block, c};
}

} // namespace

TEST(accumulate, mirrors_effects)
{
  const auto e = effects(10, 20, 30, 40, 50);
  const Counters c = accumulate({}, e);
  EXPECT_EQ(c.client_read_bytes, 10u);
  EXPECT_EQ(c.client_write_bytes, 20u);
  EXPECT_EQ(c.storage_read_bytes, 30u);
  EXPECT_EQ(c.storage_write_bytes, 40u);
  EXPECT_EQ(c.private_net_bytes, 50u);
  EXPECT_EQ(c.request_count, 1u);
}

TEST(accumulate, order_independent)
{
  std::vector<IoEffects> all;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i)
    all.push_back(effects(rng() % 1000, rng() % 1000, rng() % 1000, rng() % 1000, rng() % 1000));
  Counters a;
  for (const auto& e : all)
    a = accumulate(a, e);
  std::shuffle(all.begin(), all.end(), rng);
  Counters b;
  for (const auto& e : all)
    b = accumulate(b, e);
  EXPECT_EQ(a, b);
}

TEST(accumulate, two_replicated_writes)
{
  IoEffects e(3);
  for (OsdId o = 0; o < 3; ++o)
    e.add_write(o, 4096);
  const Counters c = accumulate(accumulate({}, e), e);
  EXPECT_EQ(c.storage_write_bytes, 24576u);
}

TEST(ratios, read_amp)
{
  Counters c;
  EXPECT_FALSE(read_amp(c));
  EXPECT_FALSE(write_amp(c));
  EXPECT_FALSE(rel_net_traffic(c));
  c.client_read_bytes = 4096;
  c.storage_read_bytes = 4096;
  EXPECT_EQ(*read_amp(c), 1.0);
  c.storage_read_bytes = 6 * 4096;
  EXPECT_EQ(*read_amp(c), 6.0);
}

TEST(ratios, write_amp_and_fallback)
{
  Counters c;
  c.client_write_bytes = 4096;
  c.storage_write_bytes = 16384;
  c.storage_read_bytes = 20480;
  EXPECT_EQ(*write_amp(c), 4.0);
  // No client reads: normalized by client writes.
  EXPECT_EQ(*read_amp(c), 5.0);
  c.private_net_bytes = 8192;
  EXPECT_EQ(*rel_net_traffic(c), 2.0);
}

TEST(csv, empty_report_is_header_only)
{
  std::ostringstream os;
  write_csv({}, os);
  EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");
}

TEST(csv, round_trip_and_cardinality)
{
  AmplificationReport rep;
  for (std::size_t b : {4096u, 65536u, 1048576u}) {
    Counters c;
    c.client_write_bytes = b;
    c.storage_write_bytes = 3 * b;
    c.private_net_bytes = 2 * b;
    c.pg_conflict_count = 7;
    rep.rows.push_back(row("rep3", 0, 0, 3, b, c));
    c.storage_write_bytes = b * 3 / 2;
    rep.rows.push_back(row("rs63", 6, 3, 0, b, c));
  }
  std::ostringstream os;
  write_csv(rep, os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_NE(text.find("rep3,0,0,3,w,random,4096,0,4096,0,12288,8192,0,0.000000,3.000000,2.000000,7"),
            std::string::npos);

  std::istringstream is(text);
  const auto back = read_csv(is);
  ASSERT_EQ(back.rows.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(back.rows[i].backend, rep.rows[i].backend);
    EXPECT_EQ(back.rows[i].counters, rep.rows[i].counters);
  }
  std::ostringstream again;
  write_csv(back, again);
  EXPECT_EQ(again.str(), text);
}

TEST(csv, parse_errors_name_the_line)
{
  std::istringstream bad_header("nope\n");
  EXPECT_THROW(read_csv(bad_header), parse_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\nrep3,0,0,3\n");
  try {
    read_csv(short_row);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(csv, export_errors)
{
  EXPECT_THROW(export_csv({}, "/nonexistent-dir/x/results.csv"), io_error);
  EXPECT_THROW(import_csv("/nonexistent-dir/x/results.csv"), io_error);
  const auto path = std::filesystem::temp_directory_path() /
                    ("ecsim-metrics-" + std::to_string(::getpid()) + ".csv");
  AmplificationReport rep;
  rep.rows.push_back(row("rep3", 0, 0, 3, 4096, Counters{}));
  export_csv(rep, path);
  EXPECT_EQ(import_csv(path).rows.size(), 1u);
  std::filesystem::remove(path);
}
