#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace jsinfer {

/// Knobs for the synthetic NDJSON corpus generator. Identical specs produce
/// byte-identical corpora.
///
/// Conflicting kinds for a field are always chosen disjoint under JSON
/// Schema semantics; in particular Integer and Number never conflict at the
/// same path, since every integer is also a valid "number" and a
/// oneOf[integer, number] schema would reject the very integers that
/// produced it.
struct CorpusSpec {
  std::uint64_t records = 1000;
  int fields = 8;            // top-level fields per record shape
  int max_depth = 3;         // nesting budget for objects/arrays
  double conflict_rate = 0.0;  // per-record chance a field takes its alternate kind
  double missing_rate = 0.1;   // per-record chance a field is absent
  int array_max = 4;           // maximum generated array length
  std::uint64_t seed = 1;
};

/// Generates the corpus into a growing buffer. Returns the NDJSON text.
std::string generate_corpus(const CorpusSpec& spec);

/// Streams the corpus to a file; returns bytes written.
std::uint64_t generate_corpus_file(const CorpusSpec& spec, const std::string& path);

}  // namespace jsinfer
