#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jsinfer/closed.hpp"
#include "jsinfer/emit.hpp"
#include "jsinfer/infer.hpp"

namespace jsinfer {

enum class InputFormat { Ndjson, JsonArray };

struct RunConfig {
  std::vector<std::string> inputs;
  int parallelism = 1;
  InputFormat format = InputFormat::Ndjson;
  EmitMeta meta;
  bool lenient = false;
};

struct PartitionStats {
  std::uint32_t id = 0;
  std::uint64_t records = 0;
  std::uint64_t bytes = 0;
  std::uint64_t skipped = 0;
  std::uint64_t duplicate_keys = 0;
  double wall_ms = 0.0;
};

struct RunStats {
  std::vector<PartitionStats> partitions;
  std::uint64_t records_total = 0;
  std::uint64_t bytes_read = 0;
  double local_ms = 0.0;   // whole local phase (parallel region)
  double global_ms = 0.0;  // sequential merge of the local results
  double emit_ms = 0.0;
  double total_ms = 0.0;

  /// max partition record count / mean partition record count; 1.0 = even.
  double skew() const;

  nlohmann::ordered_json to_json() const;
};

/// One partition's slice of the input: contiguous byte ranges, possibly
/// spanning file boundaries.
using InputSpan = std::vector<FileChunk>;

/// Splits the inputs into `parallelism` contiguous byte spans. Records are
/// owned by the span containing their first byte, so the spans cover every
/// record exactly once.
std::vector<InputSpan> plan_partitions(const RunConfig& cfg);

/// Splitting with explicit cut points in global byte space (0 = start of the
/// first file, total size = end of the last). Cuts need not fall on record
/// boundaries; readers align themselves. Exposed so tests can randomize
/// partition boundaries.
std::vector<InputSpan> plan_partitions_at(const std::vector<std::string>& paths,
                                          const std::vector<std::uint64_t>& cuts);

/// Materializes one record stream per partition. NDJSON inputs stream by
/// byte range; json-array inputs are parsed up front and dealt round-robin.
std::vector<std::unique_ptr<RecordSource>> partition_input(const RunConfig& cfg);

struct RunResult {
  JsonSchemaDoc schema;
  SisNode global_sis;
  RunStats stats;
};

/// The full open-inference pipeline: partition, infer locally in parallel
/// workers, merge globally on one thread, emit. The schema is independent of
/// the parallelism and the partition boundaries. The first worker error
/// cancels the remaining work and is rethrown with partition context.
RunResult run_open_inference(const RunConfig& cfg);

struct ClosedRunResult {
  JsonSchemaDoc schema;
  SisNode sis;
  std::string dataset_name;
  Openness openness = Openness::Closed;
};

/// Declared-schema fast path: metadata in, JSON Schema out, zero record
/// reads.
ClosedRunResult run_closed(const std::string& metadata_path, const EmitMeta& meta = {});

}  // namespace jsinfer
