#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jsinfer/sis.hpp"

namespace jsinfer {

/// Partition-local inference result: the root SIS plus provenance counters.
/// The root of a record stream is always an object node.
struct LocalSis {
  SisNode root = make_object();
  std::uint64_t record_count = 0;
  std::uint32_t partition_id = 0;
};

/// The SIS kind of a JSON value. Integer lexemes without fraction or exponent
/// classify as Integer, everything else numeric as Number.
TypeTag tag_of_value(const nlohmann::json& v);

/// Builds the SIS node describing one JSON value. Array elements are merged
/// into a single item schema; an empty array has no item.
SisNode node_from_value(const nlohmann::json& v);

/// Folds one record (a JSON object) into the accumulator, field by field:
/// absent fields are inserted, same-kind fields merge recursively, kind
/// conflicts become unions. Throws NotARecord for non-object input.
LocalSis fold_record(LocalSis acc, const nlohmann::json& record);

/// One record delivered by a RecordSource. `ordinal` counts records within
/// the partition, `byte_offset` is the absolute position in the input file
/// (zero for in-memory sources).
struct Record {
  nlohmann::json value;
  std::uint64_t ordinal = 0;
  std::uint64_t byte_offset = 0;
};

struct SourceCounters {
  std::uint64_t bytes = 0;
  std::uint64_t skipped = 0;         // malformed records dropped in lenient mode
  std::uint64_t duplicate_keys = 0;  // duplicate keys seen inside single records
};

/// A partition's record stream. Sources are single-consumer and are driven
/// from exactly one worker thread.
class RecordSource {
 public:
  virtual ~RecordSource() = default;

  /// Fills `out` with the next record; false at end of stream. Throws
  /// Error(JsonParse) with the byte offset for malformed input unless the
  /// source was built in lenient mode.
  virtual bool next(Record& out) = 0;

  virtual const SourceCounters& counters() const = 0;
};

struct ByteRange {
  std::uint64_t begin = 0;
  std::uint64_t end = UINT64_MAX;  // clamped to file size
};

struct FileChunk {
  std::string path;
  ByteRange range;
};

/// Streams newline-delimited JSON from one or more file chunks. A record is
/// owned by the chunk containing its first byte; chunk boundaries may fall
/// mid-line. Blank lines are skipped.
class NdjsonSource final : public RecordSource {
 public:
  explicit NdjsonSource(std::vector<FileChunk> chunks, bool lenient = false);
  ~NdjsonSource() override;

  bool next(Record& out) override;
  const SourceCounters& counters() const override { return counters_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SourceCounters counters_;
};

/// In-memory record stream; backs the json-array input format and tests.
class MemorySource final : public RecordSource {
 public:
  explicit MemorySource(std::vector<nlohmann::json> records);

  bool next(Record& out) override;
  const SourceCounters& counters() const override { return counters_; }

 private:
  std::vector<nlohmann::json> records_;
  std::size_t pos_ = 0;
  SourceCounters counters_;
};

struct InferOptions {
  bool lenient = false;                      // skip non-object records instead of failing
  const std::atomic<bool>* cancel = nullptr; // cooperative cancellation, checked per record
};

/// Single-pass left fold of fold_record over the stream. Memory use is
/// bounded by the schema size, not the data size. Errors carry the record
/// ordinal; parse errors from the source carry the byte offset.
LocalSis compute_local_sis(RecordSource& records, std::uint32_t partition_id,
                           const InferOptions& options = {},
                           SourceCounters* fold_counters = nullptr);

/// Parses the text of a whole-file JSON array of records, counting duplicate
/// keys like the NDJSON reader does.
std::vector<nlohmann::json> parse_record_array(std::string_view text,
                                               SourceCounters* counters = nullptr);

/// Process-wide count of record bytes consumed by record readers. The
/// declared-schema path never touches it; tests assert that.
std::uint64_t record_bytes_read();

}  // namespace jsinfer
