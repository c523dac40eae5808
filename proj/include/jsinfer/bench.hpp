#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jsinfer {

struct BenchRow {
  std::string mode;
  int parallelism = 1;
  std::uint64_t records = 0;
  std::uint64_t bytes = 0;
  double local_ms = 0.0;
  double global_ms = 0.0;
  double emit_ms = 0.0;
  double total_ms = 0.0;
  double total_stddev_ms = 0.0;
  double skew = 1.0;
};

struct BenchTable {
  std::vector<BenchRow> rows;

  /// Pinned column set: mode,P,records,bytes,local_ms,global_ms,emit_ms,total_ms
  std::string to_csv() const;
  /// Adds stddev and partition skew on top of the CSV columns.
  nlohmann::ordered_json to_json() const;
};

/// Physical core count from the sysfs CPU topology; falls back to the
/// logical CPU count when the topology is unreadable.
int physical_core_count();

/// Fixed corpus, growing parallelism. Runs `iterations` passes per P,
/// discards the first as warm-up when more than one is requested, and
/// reports means over the rest. Asserts that the emitted schema is
/// byte-identical across every run before reporting any timing.
BenchTable run_speedup(const std::vector<std::string>& corpus, const std::vector<int>& p_list,
                       int iterations);

/// Data size and parallelism grown together: factor f runs f copies of the
/// base corpus on f workers.
BenchTable run_scaleup(const std::string& base_corpus, const std::vector<int>& factors,
                       int iterations);

/// Open-path scan versus the declared-schema fast path on the same corpus.
/// The closed rows report the record-byte counter delta, which stays zero.
BenchTable run_open_vs_closed(const std::vector<std::string>& corpus,
                              const std::string& metadata_path, int iterations,
                              int parallelism);

}  // namespace jsinfer
