#include "jsinfer/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "jsinfer/error.hpp"
#include "jsinfer/runner.hpp"

namespace jsinfer {

namespace {

using Clock = std::chrono::steady_clock;

struct IterationSample {
  RunStats stats;
};

std::string csv_number(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << v;
  return out.str();
}

// Mean over kept iterations; the first iteration is dropped as warm-up when
// there is more than one.
BenchRow summarize(std::string mode, int parallelism, std::vector<RunStats> samples) {
  if (samples.size() > 1) samples.erase(samples.begin());
  BenchRow row;
  row.mode = std::move(mode);
  row.parallelism = parallelism;
  row.records = samples.back().records_total;
  row.bytes = samples.back().bytes_read;
  row.skew = samples.back().skew();
  for (const auto& s : samples) {
    row.local_ms += s.local_ms;
    row.global_ms += s.global_ms;
    row.emit_ms += s.emit_ms;
    row.total_ms += s.total_ms;
  }
  const auto n = static_cast<double>(samples.size());
  row.local_ms /= n;
  row.global_ms /= n;
  row.emit_ms /= n;
  row.total_ms /= n;
  double var = 0.0;
  for (const auto& s : samples) {
    const double d = s.total_ms - row.total_ms;
    var += d * d;
  }
  row.total_stddev_ms = samples.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return row;
}

void check_same_schema(std::string& reference, const std::string& got, const std::string& what) {
  if (reference.empty()) {
    reference = got;
  } else if (reference != got) {
    throw Error(ErrorCode::Contract, "benchmark aborted: schema mismatch across " + what);
  }
}

}  // namespace

std::string BenchTable::to_csv() const {
  std::string out = "mode,P,records,bytes,local_ms,global_ms,emit_ms,total_ms\n";
  for (const auto& r : rows) {
    out += r.mode + "," + std::to_string(r.parallelism) + "," + std::to_string(r.records) + "," +
           std::to_string(r.bytes) + "," + csv_number(r.local_ms) + "," +
           csv_number(r.global_ms) + "," + csv_number(r.emit_ms) + "," +
           csv_number(r.total_ms) + "\n";
  }
  return out;
}

nlohmann::ordered_json BenchTable::to_json() const {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["mode"] = r.mode;
    row["P"] = r.parallelism;
    row["records"] = r.records;
    row["bytes"] = r.bytes;
    row["local_ms"] = r.local_ms;
    row["global_ms"] = r.global_ms;
    row["emit_ms"] = r.emit_ms;
    row["total_ms"] = r.total_ms;
    row["total_stddev_ms"] = r.total_stddev_ms;
    row["skew"] = r.skew;
    doc.push_back(std::move(row));
  }
  return doc;
}

int physical_core_count() {
  namespace fs = std::filesystem;
  std::set<std::pair<long, long>> cores;
  for (int cpu = 0;; ++cpu) {
    const fs::path topo = "/sys/devices/system/cpu/cpu" + std::to_string(cpu) + "/topology";
    std::ifstream core_id(topo / "core_id");
    std::ifstream pkg_id(topo / "physical_package_id");
    if (!core_id || !pkg_id) break;
    long core = -1, pkg = -1;
    core_id >> core;
    pkg_id >> pkg;
    cores.emplace(pkg, core);
  }
  if (!cores.empty()) return static_cast<int>(cores.size());
  const auto fallback = std::thread::hardware_concurrency();
  return fallback > 0 ? static_cast<int>(fallback) : 1;
}

BenchTable run_speedup(const std::vector<std::string>& corpus, const std::vector<int>& p_list,
                       int iterations) {
  if (iterations < 1) throw Error(ErrorCode::Usage, "iterations must be at least 1");
  BenchTable table;
  std::string reference_schema;
  for (int p : p_list) {
    RunConfig cfg;
    cfg.inputs = corpus;
    cfg.parallelism = p;
    std::vector<RunStats> samples;
    for (int i = 0; i < iterations; ++i) {
      RunResult result = run_open_inference(cfg);
      check_same_schema(reference_schema, result.schema.to_string(), "P values");
      samples.push_back(std::move(result.stats));
    }
    table.rows.push_back(summarize("speedup", p, std::move(samples)));
  }
  return table;
}

BenchTable run_scaleup(const std::string& base_corpus, const std::vector<int>& factors,
                       int iterations) {
  if (iterations < 1) throw Error(ErrorCode::Usage, "iterations must be at least 1");
  BenchTable table;
  std::string reference_schema;
  for (int f : factors) {
    if (f < 1) throw Error(ErrorCode::Usage, "scale factors must be at least 1");
    RunConfig cfg;
    cfg.inputs.assign(static_cast<std::size_t>(f), base_corpus);
    cfg.parallelism = f;
    std::vector<RunStats> samples;
    for (int i = 0; i < iterations; ++i) {
      RunResult result = run_open_inference(cfg);
      check_same_schema(reference_schema, result.schema.to_string(), "scale factors");
      samples.push_back(std::move(result.stats));
    }
    table.rows.push_back(summarize("scaleup", f, std::move(samples)));
  }
  return table;
}

BenchTable run_open_vs_closed(const std::vector<std::string>& corpus,
                              const std::string& metadata_path, int iterations,
                              int parallelism) {
  if (iterations < 1) throw Error(ErrorCode::Usage, "iterations must be at least 1");
  BenchTable table;

  RunConfig cfg;
  cfg.inputs = corpus;
  cfg.parallelism = parallelism;
  std::vector<RunStats> open_samples;
  for (int i = 0; i < iterations; ++i) {
    open_samples.push_back(run_open_inference(cfg).stats);
  }
  table.rows.push_back(summarize("open", parallelism, std::move(open_samples)));

  const std::uint64_t bytes_before = record_bytes_read();
  std::vector<RunStats> closed_samples;
  for (int i = 0; i < iterations; ++i) {
    const auto t0 = Clock::now();
    (void)run_closed(metadata_path);
    RunStats s;
    s.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    closed_samples.push_back(std::move(s));
  }
  BenchRow closed_row = summarize("closed", 1, std::move(closed_samples));
  closed_row.bytes = record_bytes_read() - bytes_before;  // stays zero
  table.rows.push_back(std::move(closed_row));
  return table;
}

}  // namespace jsinfer
