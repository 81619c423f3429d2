// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
// ecsim: command line front end for the amplification simulator.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecsim/errors.h"
#include "ecsim/experiment.h"
#include "ecsim/gf256.h"
#include "ecsim/rs_codec.h"

using namespace ecsim;

namespace {

int report_run(const RunResult& res, const ExperimentConfig& cfg)
{
  std::cout << "wrote " << res.report.rows.size() << " rows to "
            << (cfg.output_dir / "results.csv").string() << "\n";
  for (const auto& c : res.cells) {
    if (c.data_loss)
      std::cerr << "data loss: " << c.row.backend << " / " << c.row.workload
                << ": " << *c.data_loss << "\n";
    if (c.verify_mismatches)
      std::cerr << "payload mismatch: " << c.row.backend << " / "
                << c.row.workload << ": " << c.verify_mismatches << " reads\n";
  }
  return res.status;
}

int cmd_run(const std::string& path, const std::vector<std::string>& sets)
{
  const ExperimentConfig cfg = load_config(path, sets);
  return report_run(run(cfg), cfg);
}

int cmd_trace_replay(const std::string& trace, const std::string& path,
                     const std::vector<std::string>& sets,
                     std::uint64_t file_bytes)
{
  ExperimentConfig cfg = load_config(path, sets);
  WorkloadEntry w;
  w.name = std::filesystem::path(trace).stem().string();
  w.spec.name = w.name;
  w.spec.file_bytes = file_bytes;
  w.spec.seed = cfg.seed;
  w.trace = trace;
  cfg.workloads = {w};
  cfg.validate();
  return report_run(run(cfg), cfg);
}

int cmd_compare(const std::vector<std::string>& files)
{
  std::vector<ReportRow> rows;
  for (const auto& f : files)
    for (auto& r : import_csv(f).rows)
      rows.push_back(std::move(r));
  for (const auto& c : compare_all(rows)) {
    std::cout << "workload " << c.workload << " (" << c.pattern << ", "
              << c.block_bytes << " B)\n";
    print_comparison(c, std::cout);
  }
  return exit_ok;
}

// Shift-and-add multiply, independent of the table implementation.
std::uint8_t peasant_mul(std::uint8_t a, std::uint8_t b)
{
  std::uint8_t p = 0;
  while (b) {
    if (b & 1)
      p ^= a;
    b >>= 1;
    a = static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1D : 0));
  }
  return p;
}

int cmd_selftest()
{
  int failures = 0;
  const auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    failures += ok ? 0 : 1;
  };

  bool mul_ok = true;
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      mul_ok = mul_ok && gf256::mul(a, b) == peasant_mul(a, b);
  check(mul_ok, "gf256 multiply matches shift-and-add for all 65536 pairs");

  bool inv_ok = true;
  for (int a = 1; a < 256; ++a)
    inv_ok = inv_ok && gf256::mul(a, gf256::inv(a)) == 1;
  check(inv_ok, "gf256 inverse for all 255 nonzero elements");

  std::mt19937_64 rng(7);
  for (auto [k, m] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 3}, {10, 4}}) {
    const CodeParams p(k, m, 256);
    std::vector<Chunk> data;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::uint8_t> buf(p.chunk_bytes);
      for (auto& b : buf)
        b = static_cast<std::uint8_t>(rng());
      data.push_back(Chunk::make(p, i, std::move(buf)));
    }
    auto all = data;
    for (auto& c : encode(p, data))
      all.push_back(std::move(c));
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<Chunk> avail(all.begin(), all.begin() + k);
      const auto rec = decode(p, avail);
      for (std::size_t i = 0; i < k; ++i)
        ok = ok && rec[i].payload == data[i].payload;
    }
    check(ok, "RS(" + std::to_string(k) + "," + std::to_string(m) +
                ") decodes from 20 random k-subsets");
  }
  return failures ? 1 : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Read/write amplification simulator for replicated and "
               "erasure-coded object stores"};
  app.require_subcommand(1);

  std::vector<std::string> sets;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid in a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("--set", sets, "Override a key: section.key=value");

  std::vector<std::string> csvs;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare amplification across results files");
  cmp_cmd->add_option("csv", csvs, "results.csv files")->required();

  std::string trace_path;
  std::string file_bytes = "1T";
  auto* trace_cmd = app.add_subcommand("trace-replay", "Replay a block trace through each backend");
  trace_cmd->add_option("trace", trace_path, "Trace file (timestamp,op,offset,length)")->required();
  trace_cmd->add_option("config", config_path, "Config file with cluster and backends")->required();
  trace_cmd->add_option("--set", sets, "Override a key: section.key=value");
  trace_cmd->add_option("--file-bytes", file_bytes, "Logical file size (e.g. 1G)")
    ->capture_default_str();

  auto* self_cmd = app.add_subcommand("selftest", "Check the codec against an independent oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, sets);
    if (cmp_cmd->parsed())
      return cmd_compare(csvs);
    if (trace_cmd->parsed())
      return cmd_trace_replay(trace_path, config_path, sets, parse_size(file_bytes));
    if (self_cmd->parsed())
      return cmd_selftest();
  } catch (const io_error& e) {
    std::cerr << "ecsim: " << e.what() << "\n";
    return exit_io;
  } catch (const data_loss_error& e) {
    std::cerr << "ecsim: " << e.what() << "\n";
    return exit_data_loss;
  } catch (const parse_error& e) {
    std::cerr << "ecsim: " << e.what() << "\n";
    return exit_config;
  } catch (const config_error& e) {
    std::cerr << "ecsim: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "ecsim: " << e.what() << "\n";
    return exit_config;
  }
  return exit_ok;
}
