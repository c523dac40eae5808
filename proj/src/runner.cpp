#include "jsinfer/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "jsinfer/error.hpp"
#include "jsinfer/merge.hpp"

namespace jsinfer {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void validate_config(const RunConfig& cfg) {
  if (cfg.parallelism < 1) {
    throw Error(ErrorCode::Usage, "parallelism must be at least 1");
  }
  if (cfg.inputs.empty()) {
    throw Error(ErrorCode::Usage, "at least one input path is required");
  }
}

std::uint64_t input_size(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot stat input '" + path + "': " + ec.message());
  return size;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open input '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read input '" + path + "'");
  return std::move(buf).str();
}

}  // namespace

double RunStats::skew() const {
  if (partitions.empty() || records_total == 0) return 1.0;
  std::uint64_t max_records = 0;
  for (const auto& p : partitions) max_records = std::max(max_records, p.records);
  const double mean = static_cast<double>(records_total) / partitions.size();
  return mean > 0.0 ? max_records / mean : 1.0;
}

nlohmann::ordered_json RunStats::to_json() const {
  nlohmann::ordered_json doc;
  doc["records"] = records_total;
  doc["bytes_read"] = bytes_read;
  doc["local_ms"] = local_ms;
  doc["global_ms"] = global_ms;
  doc["emit_ms"] = emit_ms;
  doc["total_ms"] = total_ms;
  doc["skew"] = skew();
  auto parts = nlohmann::ordered_json::array();
  for (const auto& p : partitions) {
    nlohmann::ordered_json entry;
    entry["id"] = p.id;
    entry["records"] = p.records;
    entry["bytes"] = p.bytes;
    entry["skipped"] = p.skipped;
    entry["duplicate_keys"] = p.duplicate_keys;
    entry["wall_ms"] = p.wall_ms;
    parts.push_back(std::move(entry));
  }
  doc["partitions"] = std::move(parts);
  return doc;
}

std::vector<InputSpan> plan_partitions_at(const std::vector<std::string>& paths,
                                          const std::vector<std::uint64_t>& cuts) {
  struct FileExtent {
    std::string path;
    std::uint64_t global_begin;
    std::uint64_t size;
  };
  std::vector<FileExtent> extents;
  std::uint64_t total = 0;
  for (const auto& path : paths) {
    const auto size = input_size(path);
    extents.push_back({path, total, size});
    total += size;
  }

  std::vector<std::uint64_t> bounds;
  bounds.push_back(0);
  for (auto c : cuts) bounds.push_back(std::min(c, total));
  bounds.push_back(total);
  std::sort(bounds.begin() + 1, bounds.end() - 1);

  std::vector<InputSpan> spans;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const std::uint64_t begin = bounds[i], end = bounds[i + 1];
    InputSpan span;
    for (const auto& ext : extents) {
      const std::uint64_t file_end = ext.global_begin + ext.size;
      const std::uint64_t lo = std::max(begin, ext.global_begin);
      const std::uint64_t hi = std::min(end, file_end);
      if (lo < hi) {
        span.push_back({ext.path, {lo - ext.global_begin, hi - ext.global_begin}});
      }
    }
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<InputSpan> plan_partitions(const RunConfig& cfg) {
  validate_config(cfg);
  std::uint64_t total = 0;
  for (const auto& path : cfg.inputs) total += input_size(path);

  const auto p = static_cast<std::uint64_t>(cfg.parallelism);
  std::vector<std::uint64_t> cuts;
  for (std::uint64_t i = 1; i < p; ++i) cuts.push_back(total * i / p);
  return plan_partitions_at(cfg.inputs, cuts);
}

std::vector<std::unique_ptr<RecordSource>> partition_input(const RunConfig& cfg) {
  validate_config(cfg);
  std::vector<std::unique_ptr<RecordSource>> sources;

  if (cfg.format == InputFormat::Ndjson) {
    for (auto& span : plan_partitions(cfg)) {
      sources.push_back(std::make_unique<NdjsonSource>(std::move(span), cfg.lenient));
    }
    return sources;
  }

  // json-array fallback: parse up front, deal records round-robin.
  std::vector<std::vector<nlohmann::json>> buckets(cfg.parallelism);
  std::size_t next = 0;
  for (const auto& path : cfg.inputs) {
    auto records = parse_record_array(read_file(path));
    for (auto& rec : records) {
      buckets[next % buckets.size()].push_back(std::move(rec));
      ++next;
    }
  }
  for (auto& bucket : buckets) {
    sources.push_back(std::make_unique<MemorySource>(std::move(bucket)));
  }
  return sources;
}

RunResult run_open_inference(const RunConfig& cfg) {
  validate_config(cfg);
  const auto t_total = Clock::now();

  auto sources = partition_input(cfg);
  const auto worker_count = sources.size();

  std::vector<LocalSis> locals(worker_count);
  std::vector<PartitionStats> partition_stats(worker_count);
  std::atomic<bool> cancel{false};
  std::mutex error_mutex;
  std::vector<std::pair<std::uint32_t, Error>> errors;

  const auto t_local = Clock::now();
  {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::size_t i = 0; i < worker_count; ++i) {
      workers.emplace_back([&, i] {
        const auto pid = static_cast<std::uint32_t>(i);
        const auto t0 = Clock::now();
        SourceCounters fold_counters;
        try {
          InferOptions options;
          options.lenient = cfg.lenient;
          options.cancel = &cancel;
          locals[i] = compute_local_sis(*sources[i], pid, options, &fold_counters);
        } catch (const Error& e) {
          cancel.store(true, std::memory_order_relaxed);
          std::lock_guard<std::mutex> lock(error_mutex);
          errors.emplace_back(pid, e);
        } catch (const std::exception& e) {
          cancel.store(true, std::memory_order_relaxed);
          std::lock_guard<std::mutex> lock(error_mutex);
          errors.emplace_back(pid, Error(ErrorCode::Io, e.what()));
        }
        const auto& sc = sources[i]->counters();
        partition_stats[i] = PartitionStats{pid,
                                            locals[i].record_count,
                                            sc.bytes,
                                            sc.skipped + fold_counters.skipped,
                                            sc.duplicate_keys,
                                            ms_since(t0)};
      });
    }
    for (auto& w : workers) w.join();
  }
  const double local_ms = ms_since(t_local);

  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto& [pid, first] = errors.front();
    std::string message = "partition " + std::to_string(pid) + ": " + first.what();
    if (errors.size() > 1) {
      message += " (and " + std::to_string(errors.size() - 1) + " more worker error(s))";
    }
    throw Error(first.code(), std::move(message));
  }

  const auto t_global = Clock::now();
  SisNode global = merge_sis(locals);
  const double global_ms = ms_since(t_global);

  const auto t_emit = Clock::now();
  JsonSchemaDoc schema = to_json_schema(global, cfg.meta);
  const double emit_ms = ms_since(t_emit);

  RunStats stats;
  stats.partitions = std::move(partition_stats);
  for (const auto& p : stats.partitions) {
    stats.records_total += p.records;
    stats.bytes_read += p.bytes;
  }
  stats.local_ms = local_ms;
  stats.global_ms = global_ms;
  stats.emit_ms = emit_ms;
  stats.total_ms = ms_since(t_total);

  return RunResult{std::move(schema), std::move(global), std::move(stats)};
}

ClosedRunResult run_closed(const std::string& metadata_path, const EmitMeta& meta) {
  DeclaredSchema declared = load_declared_schema(metadata_path);
  SisNode sis = declared_to_sis(declared);
  JsonSchemaDoc schema = to_json_schema(sis, meta);
  return ClosedRunResult{std::move(schema), std::move(sis), std::move(declared.dataset_name),
                         declared.openness};
}

}  // namespace jsinfer
