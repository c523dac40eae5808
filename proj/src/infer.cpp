#include "jsinfer/infer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <utility>

#include "jsinfer/error.hpp"
#include "jsinfer/merge.hpp"

namespace jsinfer {

namespace {

using nlohmann::json;

std::atomic<std::uint64_t> g_record_bytes{0};

// SAX handler that builds a DOM while counting duplicate keys, which the
// default DOM parser silently collapses (last occurrence wins either way).
class DomBuilder final : public nlohmann::json_sax<json> {
 public:
  json root;
  std::uint64_t duplicate_keys = 0;
  std::size_t error_position = 0;
  std::string error_message;

  bool null() override { return put(json(nullptr)); }
  bool boolean(bool v) override { return put(json(v)); }
  bool number_integer(number_integer_t v) override { return put(json(v)); }
  bool number_unsigned(number_unsigned_t v) override { return put(json(v)); }
  bool number_float(number_float_t v, const string_t&) override { return put(json(v)); }
  bool string(string_t& v) override { return put(json(std::move(v))); }
  bool binary(binary_t& v) override { return put(json(std::move(v))); }

  bool start_object(std::size_t) override {
    json* slot = next_slot();
    *slot = json::object();
    stack_.push_back(slot);
    return true;
  }

  bool key(string_t& v) override {
    if (stack_.back()->contains(v)) ++duplicate_keys;
    pending_key_ = std::move(v);
    return true;
  }

  bool end_object() override {
    stack_.pop_back();
    return true;
  }

  bool start_array(std::size_t) override {
    json* slot = next_slot();
    *slot = json::array();
    stack_.push_back(slot);
    return true;
  }

  bool end_array() override {
    stack_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    error_position = position;
    error_message = ex.what();
    return false;
  }

 private:
  bool put(json v) {
    *next_slot() = std::move(v);
    return true;
  }

  json* next_slot() {
    if (stack_.empty()) return &root;
    json& parent = *stack_.back();
    if (parent.is_object()) return &parent[pending_key_];
    parent.push_back(json());
    return &parent.back();
  }

  std::vector<json*> stack_;
  std::string pending_key_;
};

bool sax_parse_text(std::string_view text, DomBuilder& builder) {
  return json::sax_parse(text.data(), text.data() + text.size(), &builder);
}

// Fuses one JSON value into an existing node in place, following the
// per-field insert/conflict discipline of the local aggregation phase.
// Equivalent to merge_nodes(dst, node_from_value(v)); the test suite holds
// the two routes to each other.
void merge_value(SisNode& dst, const json& v) {
  const TypeTag vt = tag_of_value(v);

  if (dst.tag == TypeTag::Union) {
    auto it = std::lower_bound(
        dst.alternatives.begin(), dst.alternatives.end(), vt,
        [](const SisNode& alt, TypeTag t) { return alt.tag < t; });
    if (it != dst.alternatives.end() && it->tag == vt) {
      merge_value(*it, v);
    } else {
      dst.alternatives.insert(it, node_from_value(v));
    }
    return;
  }

  if (dst.tag != vt) {
    dst = make_union(std::move(dst), node_from_value(v));
    return;
  }

  switch (vt) {
    case TypeTag::Object:
      for (const auto& [name, child] : v.items()) {
        auto it = std::lower_bound(
            dst.fields.begin(), dst.fields.end(), name,
            [](const auto& f, const std::string& n) { return f.first < n; });
        if (it != dst.fields.end() && it->first == name) {
          merge_value(it->second, child);
        } else {
          dst.fields.emplace(it, name, node_from_value(child));
        }
      }
      break;
    case TypeTag::Array:
      for (const auto& elem : v) {
        if (dst.item.empty()) {
          dst.item.push_back(node_from_value(elem));
        } else {
          merge_value(dst.item.front(), elem);
        }
      }
      break;
    default:
      break;  // matching primitive
  }
}

}  // namespace

TypeTag tag_of_value(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return TypeTag::Null;
    case json::value_t::boolean: return TypeTag::Boolean;
    case json::value_t::number_integer:
    case json::value_t::number_unsigned: return TypeTag::Integer;
    case json::value_t::number_float: return TypeTag::Number;
    case json::value_t::string: return TypeTag::String;
    case json::value_t::object: return TypeTag::Object;
    case json::value_t::array: return TypeTag::Array;
    default:
      throw Error(ErrorCode::Contract, "tag_of_value: unsupported JSON value type");
  }
}

SisNode node_from_value(const json& v) {
  const TypeTag tag = tag_of_value(v);
  switch (tag) {
    case TypeTag::Object: {
      SisNode node;
      node.tag = TypeTag::Object;
      node.fields.reserve(v.size());
      // json objects iterate in key order, so the field map is born sorted.
      for (const auto& [name, child] : v.items()) {
        node.fields.emplace_back(name, node_from_value(child));
      }
      return node;
    }
    case TypeTag::Array: {
      SisNode node;
      node.tag = TypeTag::Array;
      for (const auto& elem : v) {
        if (node.item.empty()) {
          node.item.push_back(node_from_value(elem));
        } else {
          node.item.front() = merge_nodes(std::move(node.item.front()), node_from_value(elem));
        }
      }
      return node;
    }
    default:
      return make_primitive(tag);
  }
}

LocalSis fold_record(LocalSis acc, const json& record) {
  if (!record.is_object()) {
    throw Error(ErrorCode::NotARecord,
                "record is not a JSON object (got " + std::string(record.type_name()) + ")");
  }
  merge_value(acc.root, record);
  acc.record_count += 1;
  return acc;
}

// --- NDJSON source ---------------------------------------------------------

struct NdjsonSource::Impl {
  std::vector<FileChunk> chunks;
  bool lenient = false;

  std::size_t chunk_idx = 0;
  std::ifstream file;
  std::uint64_t chunk_end = 0;      // absolute, clamped to file size
  std::uint64_t file_size = 0;
  bool chunk_open = false;
  bool skipping_partial = false;    // discard up to the first newline

  std::string pending;              // unconsumed bytes
  std::size_t pending_pos = 0;      // consumed prefix of `pending`
  std::uint64_t pending_offset = 0; // absolute offset of pending[pending_pos]
  bool at_eof = false;

  std::uint64_t ordinal = 0;

  static constexpr std::size_t kBlockSize = 1 << 20;

  bool open_next_chunk(SourceCounters& counters);
  bool fill(SourceCounters& counters);
  bool next_line(SourceCounters& counters, std::string_view& line, std::uint64_t& line_start);
};

bool NdjsonSource::Impl::open_next_chunk(SourceCounters& counters) {
  while (chunk_idx < chunks.size()) {
    const FileChunk& chunk = chunks[chunk_idx++];
    std::error_code ec;
    const auto size = std::filesystem::file_size(chunk.path, ec);
    if (ec) {
      throw Error(ErrorCode::Io, "cannot stat input '" + chunk.path + "': " + ec.message());
    }
    file_size = size;
    chunk_end = std::min<std::uint64_t>(chunk.range.end, size);
    std::uint64_t begin = chunk.range.begin;
    if (begin >= chunk_end) continue;

    file.close();
    file.clear();
    file.open(chunk.path, std::ios::binary);
    if (!file) {
      throw Error(ErrorCode::Io, "cannot open input '" + chunk.path + "'");
    }

    // A record belongs to the chunk containing its first byte. Starting one
    // byte early and discarding through the first newline lands exactly on
    // the first record whose start is >= begin.
    skipping_partial = begin > 0;
    const std::uint64_t read_from = begin > 0 ? begin - 1 : 0;
    file.seekg(static_cast<std::streamoff>(read_from));
    pending.clear();
    pending_pos = 0;
    pending_offset = read_from;
    at_eof = false;
    chunk_open = true;
    (void)counters;
    return true;
  }
  return false;
}

bool NdjsonSource::Impl::fill(SourceCounters& counters) {
  if (at_eof) return false;
  if (pending_pos > 0) {
    pending.erase(0, pending_pos);
    pending_pos = 0;
  }
  const std::size_t old_size = pending.size();
  pending.resize(old_size + kBlockSize);
  file.read(pending.data() + old_size, static_cast<std::streamsize>(kBlockSize));
  const auto got = static_cast<std::size_t>(file.gcount());
  pending.resize(old_size + got);
  if (got == 0) {
    at_eof = true;
    return false;
  }
  counters.bytes += got;
  g_record_bytes.fetch_add(got, std::memory_order_relaxed);
  return true;
}

// Produces the next line starting within [begin, end) of the current chunk,
// opening subsequent chunks as needed. Lines may extend past the chunk end.
bool NdjsonSource::Impl::next_line(SourceCounters& counters, std::string_view& line,
                                   std::uint64_t& line_start) {
  for (;;) {
    if (!chunk_open && !open_next_chunk(counters)) return false;

    const std::uint64_t line_begin = pending_offset;
    if (!skipping_partial && line_begin >= chunk_end) {
      chunk_open = false;  // next record belongs to the following chunk
      continue;
    }

    std::size_t nl = pending.find('\n', pending_pos);
    while (nl == std::string::npos) {
      if (!fill(counters)) break;
      nl = pending.find('\n', pending_pos);
    }

    std::size_t line_len;
    std::size_t consumed;
    if (nl == std::string::npos) {
      // Unterminated final line.
      line_len = pending.size() - pending_pos;
      consumed = line_len;
      if (line_len == 0) {
        chunk_open = false;
        continue;
      }
    } else {
      line_len = nl - pending_pos;
      consumed = line_len + 1;
    }

    const std::size_t start = pending_pos;
    pending_pos += consumed;
    pending_offset += consumed;

    if (skipping_partial) {
      skipping_partial = false;
      continue;  // partial first line belongs to the previous chunk
    }

    line = std::string_view(pending).substr(start, line_len);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;  // blank line
    line_start = line_begin;
    return true;
  }
}

NdjsonSource::NdjsonSource(std::vector<FileChunk> chunks, bool lenient)
    : impl_(std::make_unique<Impl>()) {
  impl_->chunks = std::move(chunks);
  impl_->lenient = lenient;
}

NdjsonSource::~NdjsonSource() = default;

bool NdjsonSource::next(Record& out) {
  std::string_view line;
  std::uint64_t line_start = 0;
  while (impl_->next_line(counters_, line, line_start)) {
    DomBuilder builder;
    if (!sax_parse_text(line, builder)) {
      if (impl_->lenient) {
        ++counters_.skipped;
        continue;
      }
      throw Error(ErrorCode::JsonParse,
                  "malformed JSON at byte " +
                      std::to_string(line_start + builder.error_position) + " of '" +
                      impl_->chunks[impl_->chunk_idx - 1].path + "': " + builder.error_message);
    }
    counters_.duplicate_keys += builder.duplicate_keys;
    out.value = std::move(builder.root);
    out.ordinal = impl_->ordinal++;
    out.byte_offset = line_start;
    return true;
  }
  return false;
}

// --- in-memory source ------------------------------------------------------

MemorySource::MemorySource(std::vector<nlohmann::json> records)
    : records_(std::move(records)) {}

bool MemorySource::next(Record& out) {
  if (pos_ >= records_.size()) return false;
  out.value = std::move(records_[pos_]);
  out.ordinal = pos_;
  out.byte_offset = 0;
  ++pos_;
  return true;
}

// --- local aggregation -----------------------------------------------------

LocalSis compute_local_sis(RecordSource& records, std::uint32_t partition_id,
                           const InferOptions& options, SourceCounters* fold_counters) {
  LocalSis acc;
  acc.partition_id = partition_id;
  Record rec;
  while (records.next(rec)) {
    if (options.cancel && options.cancel->load(std::memory_order_relaxed)) break;
    if (!rec.value.is_object()) {
      if (options.lenient) {
        if (fold_counters) ++fold_counters->skipped;
        continue;
      }
      throw Error(ErrorCode::NotARecord,
                  "record #" + std::to_string(rec.ordinal) + " is not a JSON object (got " +
                      std::string(rec.value.type_name()) + ")");
    }
    merge_value(acc.root, rec.value);
    acc.record_count += 1;
  }
  return acc;
}

std::vector<nlohmann::json> parse_record_array(std::string_view text, SourceCounters* counters) {
  DomBuilder builder;
  if (!sax_parse_text(text, builder)) {
    throw Error(ErrorCode::JsonParse, "malformed JSON at byte " +
                                          std::to_string(builder.error_position) + ": " +
                                          builder.error_message);
  }
  if (!builder.root.is_array()) {
    throw Error(ErrorCode::JsonParse, "json-array input must be a top-level JSON array");
  }
  if (counters) {
    counters->bytes += text.size();
    counters->duplicate_keys += builder.duplicate_keys;
  }
  g_record_bytes.fetch_add(text.size(), std::memory_order_relaxed);
  std::vector<nlohmann::json> out;
  out.reserve(builder.root.size());
  for (auto& elem : builder.root) out.push_back(std::move(elem));
  return out;
}

std::uint64_t record_bytes_read() { return g_record_bytes.load(std::memory_order_relaxed); }

}  // namespace jsinfer
