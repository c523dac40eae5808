#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jsinfer {

/// Node categories of the schema intermediate structure. Integer and Number
/// are distinct and never silently widened into each other.
enum class TypeTag : std::uint8_t {
  Null,
  Boolean,
  Integer,
  Number,
  String,
  Object,
  Array,
  Multiset,
  Union,
};

/// TypeTag minus Union; keys union alternatives. The declaration order is the
/// canonical sort order for alternatives.
enum class KindKey : std::uint8_t {
  Null,
  Boolean,
  Integer,
  Number,
  String,
  Object,
  Array,
  Multiset,
};

std::string_view tag_name(TypeTag tag);
std::optional<TypeTag> tag_from_name(std::string_view name);

/// Schema intermediate structure tree node.
///
/// Exactly one of the child containers is populated, depending on the tag:
///   Object        -> fields (sorted by name, names unique)
///   Array/Multiset-> item (at most one entry; empty = no element observed)
///   Union         -> alternatives (>= 2, non-union, pairwise-distinct kinds)
///   primitives    -> none
struct SisNode {
  TypeTag tag = TypeTag::Null;
  std::vector<std::pair<std::string, SisNode>> fields;
  std::vector<SisNode> item;
  std::vector<SisNode> alternatives;

  bool operator==(const SisNode&) const = default;

  bool has_item() const { return !item.empty(); }
  const SisNode* item_node() const { return item.empty() ? nullptr : &item.front(); }
  SisNode* item_node() { return item.empty() ? nullptr : &item.front(); }

  const SisNode* find_field(std::string_view name) const;
  SisNode* find_field(std::string_view name);
};

SisNode make_primitive(TypeTag tag);
SisNode make_object(std::vector<std::pair<std::string, SisNode>> fields = {});
SisNode make_array(std::optional<SisNode> item = std::nullopt);
SisNode make_multiset(std::optional<SisNode> item = std::nullopt);

/// Builds a union from explicit alternatives; validates union invariants and
/// sorts the alternatives into canonical order.
SisNode union_from_alternatives(std::vector<SisNode> alternatives);

/// The node's kind key. Contract violation if the node is a union.
KindKey kind_key(const SisNode& node);

/// Recursively sorts object fields by name and union alternatives by kind
/// key. Idempotent; the input must satisfy all invariants except ordering.
SisNode canonicalize(SisNode node);

/// Structural equality up to canonical ordering.
bool sis_equal(const SisNode& a, const SisNode& b);

/// Full invariant walk; throws Error on the first violation. Used by the
/// deserializer and the test suites.
void check_invariants(const SisNode& node);

}  // namespace jsinfer
