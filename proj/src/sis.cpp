#include "jsinfer/sis.hpp"

#include <algorithm>

#include "jsinfer/error.hpp"

namespace jsinfer {

std::string_view tag_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::Null: return "null";
    case TypeTag::Boolean: return "boolean";
    case TypeTag::Integer: return "integer";
    case TypeTag::Number: return "number";
    case TypeTag::String: return "string";
    case TypeTag::Object: return "object";
    case TypeTag::Array: return "array";
    case TypeTag::Multiset: return "multiset";
    case TypeTag::Union: return "union";
  }
  return "invalid";
}

std::optional<TypeTag> tag_from_name(std::string_view name) {
  if (name == "null") return TypeTag::Null;
  if (name == "boolean") return TypeTag::Boolean;
  if (name == "integer") return TypeTag::Integer;
  if (name == "number") return TypeTag::Number;
  if (name == "string") return TypeTag::String;
  if (name == "object") return TypeTag::Object;
  if (name == "array") return TypeTag::Array;
  if (name == "multiset") return TypeTag::Multiset;
  if (name == "union") return TypeTag::Union;
  return std::nullopt;
}

const SisNode* SisNode::find_field(std::string_view name) const {
  auto it = std::lower_bound(fields.begin(), fields.end(), name,
                             [](const auto& f, std::string_view n) { return f.first < n; });
  if (it == fields.end() || it->first != name) return nullptr;
  return &it->second;
}

SisNode* SisNode::find_field(std::string_view name) {
  return const_cast<SisNode*>(static_cast<const SisNode*>(this)->find_field(name));
}

SisNode make_primitive(TypeTag tag) {
  if (tag >= TypeTag::Object) {
    throw Error(ErrorCode::Contract,
                "make_primitive: '" + std::string(tag_name(tag)) + "' is not a primitive tag");
  }
  SisNode n;
  n.tag = tag;
  return n;
}

SisNode make_object(std::vector<std::pair<std::string, SisNode>> fields) {
  SisNode n;
  n.tag = TypeTag::Object;
  std::sort(fields.begin(), fields.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (fields[i - 1].first == fields[i].first) {
      throw Error(ErrorCode::Contract, "make_object: duplicate field '" + fields[i].first + "'");
    }
  }
  n.fields = std::move(fields);
  return n;
}

SisNode make_array(std::optional<SisNode> item) {
  SisNode n;
  n.tag = TypeTag::Array;
  if (item) n.item.push_back(std::move(*item));
  return n;
}

SisNode make_multiset(std::optional<SisNode> item) {
  SisNode n;
  n.tag = TypeTag::Multiset;
  if (item) n.item.push_back(std::move(*item));
  return n;
}

SisNode union_from_alternatives(std::vector<SisNode> alternatives) {
  SisNode n;
  n.tag = TypeTag::Union;
  n.alternatives = std::move(alternatives);
  n = canonicalize(std::move(n));
  check_invariants(n);
  return n;
}

KindKey kind_key(const SisNode& node) {
  if (node.tag == TypeTag::Union) {
    throw Error(ErrorCode::Contract, "kind_key: a union node has no single kind");
  }
  return static_cast<KindKey>(node.tag);
}

SisNode canonicalize(SisNode node) {
  for (auto& [name, child] : node.fields) child = canonicalize(std::move(child));
  for (auto& child : node.item) child = canonicalize(std::move(child));
  for (auto& child : node.alternatives) child = canonicalize(std::move(child));
  std::sort(node.fields.begin(), node.fields.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(node.alternatives.begin(), node.alternatives.end(),
            [](const SisNode& a, const SisNode& b) { return kind_key(a) < kind_key(b); });
  return node;
}

bool sis_equal(const SisNode& a, const SisNode& b) {
  return canonicalize(a) == canonicalize(b);
}

namespace {

[[noreturn]] void violate(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Contract, "SIS invariant violated at " + path + ": " + what);
}

void check_node(const SisNode& node, const std::string& path) {
  const bool is_object = node.tag == TypeTag::Object;
  const bool is_collection = node.tag == TypeTag::Array || node.tag == TypeTag::Multiset;
  const bool is_union = node.tag == TypeTag::Union;

  if (!is_object && !node.fields.empty()) violate(path, "fields on a non-object node");
  if (!is_collection && !node.item.empty()) violate(path, "item on a non-collection node");
  if (!is_union && !node.alternatives.empty()) violate(path, "alternatives on a non-union node");

  if (is_object) {
    for (std::size_t i = 1; i < node.fields.size(); ++i) {
      if (node.fields[i - 1].first > node.fields[i].first) violate(path, "fields out of order");
      if (node.fields[i - 1].first == node.fields[i].first) {
        violate(path, "duplicate field '" + node.fields[i].first + "'");
      }
    }
    for (const auto& [name, child] : node.fields) check_node(child, path + "." + name);
  } else if (is_collection) {
    if (node.item.size() > 1) violate(path, "more than one item schema");
    if (node.has_item()) check_node(node.item.front(), path + "[]");
  } else if (is_union) {
    if (node.alternatives.size() < 2) violate(path, "union with fewer than two alternatives");
    for (const auto& alt : node.alternatives) {
      if (alt.tag == TypeTag::Union) violate(path, "nested union");
    }
    for (std::size_t i = 1; i < node.alternatives.size(); ++i) {
      KindKey prev = kind_key(node.alternatives[i - 1]);
      KindKey cur = kind_key(node.alternatives[i]);
      if (prev > cur) violate(path, "union alternatives out of order");
      if (prev == cur) {
        violate(path, "duplicate union alternative kind '" +
                          std::string(tag_name(node.alternatives[i].tag)) + "'");
      }
    }
    std::size_t i = 0;
    for (const auto& alt : node.alternatives) check_node(alt, path + "|" + std::to_string(i++));
  }
}

}  // namespace

void check_invariants(const SisNode& node) { check_node(node, "$"); }

}  // namespace jsinfer
