#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jsinfer/sis.hpp"

namespace jsinfer {

enum class Openness { Open, Closed };

struct DeclaredField;

/// Recursive description of a declared dataset type: a primitive kind, an
/// object with named fields, or an array/multiset of an element type.
struct DeclaredType {
  TypeTag kind = TypeTag::Object;
  std::vector<DeclaredField> fields;  // kind == Object
  std::vector<DeclaredType> element;  // kind in {Array, Multiset}; exactly one
};

struct DeclaredField {
  std::string name;
  bool optional = false;
  DeclaredType type;
};

struct DeclaredSchema {
  std::string dataset_name;
  Openness openness = Openness::Closed;
  DeclaredType root;
};

/// Parses declared-schema metadata:
///   {"dataset": <name>, "openness": "open"|"closed", "type": <type>}
/// where <type> is {"kind": "integer"|...}, {"kind": "object", "fields":
/// [{"name":..., "optional": bool, "type": <type>}]} or {"kind": "array"|
/// "multiset", "of": <type>}. Parse errors carry line/column; duplicate
/// field names and unknown type names have their own error codes.
DeclaredSchema parse_declared_schema(std::string_view text);

/// parse_declared_schema over a file's contents.
DeclaredSchema load_declared_schema(const std::string& path);

/// Structure-preserving mapping to SIS. Never produces union nodes; the
/// optional flag on declared fields is accepted but not represented.
SisNode declared_to_sis(const DeclaredSchema& schema);

}  // namespace jsinfer
