#pragma once

#include <string>
#include <string_view>

#include "jsinfer/sis.hpp"

namespace jsinfer {

/// Interchange encoding of an SIS tree: a self-describing JSON document,
/// UTF-8, compact, keys in canonical order. Byte-exact for identical trees.
///
///   {"tag": "object", "fields": {"a": {"tag": "integer"}}}
///   {"tag": "array", "item": {"tag": "string"}}
///   {"tag": "union", "alternatives": [{"tag": "integer"}, {"tag": "string"}]}
std::string serialize_sis(const SisNode& node);

/// Inverse of serialize_sis. Rejects malformed bytes (SisMalformed), unknown
/// tags (SisUnknownTag), unions with fewer than two alternatives
/// (SisSingletonUnion), kind-duplicate alternatives (SisDuplicateKind) and
/// nested unions (SisNestedUnion).
SisNode deserialize_sis(std::string_view bytes);

}  // namespace jsinfer
