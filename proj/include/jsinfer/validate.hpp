#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "jsinfer/sis.hpp"

namespace jsinfer {

/// Checks a JSON value against an SIS node:
///   primitives  match by exact tag (Integer never widens to Number);
///   objects     require every present key to exist in the schema and
///               conform (absent schema fields are fine - no required
///               semantics);
///   collections require every element to conform to the item schema; an
///               absent item admits only the empty array;
///   unions      require at least one conforming alternative.
/// JSON arrays stand in for multiset values, which have no JSON literal.
bool conforms(const nlohmann::json& v, const SisNode& s);

struct ViolationDetail {
  std::string path;     // JSON-pointer-ish location within the value
  std::string message;
};

/// Like conforms, but reports where and why the first mismatch occurred.
std::optional<ViolationDetail> explain_violation(const nlohmann::json& v, const SisNode& s);

}  // namespace jsinfer
