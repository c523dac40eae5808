#include "jsinfer/sis_io.hpp"

#include <nlohmann/json.hpp>

#include "jsinfer/error.hpp"

namespace jsinfer {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json encode(const SisNode& node) {
  ordered_json out;
  out["tag"] = std::string(tag_name(node.tag));
  switch (node.tag) {
    case TypeTag::Object: {
      ordered_json fields = ordered_json::object();
      for (const auto& [name, child] : node.fields) fields[name] = encode(child);
      out["fields"] = std::move(fields);
      break;
    }
    case TypeTag::Array:
    case TypeTag::Multiset:
      if (node.has_item()) out["item"] = encode(node.item.front());
      break;
    case TypeTag::Union: {
      ordered_json alts = ordered_json::array();
      for (const auto& alt : node.alternatives) alts.push_back(encode(alt));
      out["alternatives"] = std::move(alts);
      break;
    }
    default:
      break;
  }
  return out;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::SisMalformed, "SIS interchange: " + what);
}

SisNode decode(const nlohmann::json& v);

SisNode decode_union(const nlohmann::json& v) {
  const auto alts = v.find("alternatives");
  if (alts == v.end() || !alts->is_array()) malformed("union requires an 'alternatives' array");
  if (alts->size() < 2) {
    throw Error(ErrorCode::SisSingletonUnion,
                "SIS interchange: union with " + std::to_string(alts->size()) +
                    " alternative(s); at least two required");
  }
  SisNode node;
  node.tag = TypeTag::Union;
  bool kinds_seen[8] = {};
  for (const auto& alt_doc : *alts) {
    SisNode alt = decode(alt_doc);
    if (alt.tag == TypeTag::Union) {
      throw Error(ErrorCode::SisNestedUnion, "SIS interchange: union nested inside a union");
    }
    auto k = static_cast<std::size_t>(kind_key(alt));
    if (kinds_seen[k]) {
      throw Error(ErrorCode::SisDuplicateKind,
                  "SIS interchange: duplicate union alternative kind '" +
                      std::string(tag_name(alt.tag)) + "'");
    }
    kinds_seen[k] = true;
    node.alternatives.push_back(std::move(alt));
  }
  return node;
}

SisNode decode(const nlohmann::json& v) {
  if (!v.is_object()) malformed("node must be a JSON object");
  const auto tag_it = v.find("tag");
  if (tag_it == v.end() || !tag_it->is_string()) malformed("node requires a string 'tag'");
  const auto tag = tag_from_name(tag_it->get_ref<const std::string&>());
  if (!tag) {
    throw Error(ErrorCode::SisUnknownTag,
                "SIS interchange: unknown tag '" + tag_it->get<std::string>() + "'");
  }

  for (const auto& [key, value] : v.items()) {
    if (key == "tag") continue;
    if (key == "fields" && *tag == TypeTag::Object) continue;
    if (key == "item" && (*tag == TypeTag::Array || *tag == TypeTag::Multiset)) continue;
    if (key == "alternatives" && *tag == TypeTag::Union) continue;
    malformed("unexpected key '" + key + "' on a " + std::string(tag_name(*tag)) + " node");
  }

  switch (*tag) {
    case TypeTag::Object: {
      SisNode node;
      node.tag = TypeTag::Object;
      if (const auto it = v.find("fields"); it != v.end()) {
        if (!it->is_object()) malformed("'fields' must be a JSON object");
        for (const auto& [name, child] : it->items()) {
          node.fields.emplace_back(name, decode(child));
        }
      }
      return node;
    }
    case TypeTag::Array:
    case TypeTag::Multiset: {
      SisNode node;
      node.tag = *tag;
      if (const auto it = v.find("item"); it != v.end()) node.item.push_back(decode(*it));
      return node;
    }
    case TypeTag::Union:
      return decode_union(v);
    default: {
      SisNode node;
      node.tag = *tag;
      return node;
    }
  }
}

}  // namespace

std::string serialize_sis(const SisNode& node) {
  return encode(canonicalize(node)).dump();
}

SisNode deserialize_sis(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SisMalformed,
                std::string("SIS interchange: not valid JSON: ") + e.what());
  }
  SisNode node = canonicalize(decode(doc));
  check_invariants(node);
  return node;
}

}  // namespace jsinfer
