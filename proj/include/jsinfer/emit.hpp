#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "jsinfer/sis.hpp"

namespace jsinfer {

struct EmitMeta {
  std::string schema_uri = "https://json-schema.org/draft/2020-12/schema";
  std::optional<std::string> id;
  std::optional<std::string> title;
};

/// An emitted JSON Schema document. `body` carries the envelope keys
/// ($schema, and $id/title when configured) followed by the schema keywords;
/// only {$schema, $id, title, type, properties, items, oneOf, x-collection}
/// ever appear.
struct JsonSchemaDoc {
  nlohmann::ordered_json body;
  EmitMeta meta;

  /// Canonical bytes: UTF-8, two-space indent, trailing newline.
  std::string to_string() const;
};

/// DFS conversion of an SIS tree to JSON Schema: primitives map to "type",
/// objects to "properties", collections to "items" (multisets annotated with
/// "x-collection"), unions to "oneOf". Deterministic and byte-exact for
/// equal canonical trees.
JsonSchemaDoc to_json_schema(const SisNode& root, const EmitMeta& meta = {});

/// Parses a document in the emitted keyword subset back into an SIS tree.
/// Throws Error(SchemaParse) on anything outside the subset.
SisNode sis_from_json_schema(const nlohmann::json& schema_doc);

}  // namespace jsinfer
