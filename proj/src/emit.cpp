#include "jsinfer/emit.hpp"

#include "jsinfer/error.hpp"

namespace jsinfer {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json emit_node(const SisNode& node) {
  ordered_json out;
  switch (node.tag) {
    case TypeTag::Object: {
      out["type"] = "object";
      ordered_json props = ordered_json::object();
      for (const auto& [name, child] : node.fields) props[name] = emit_node(child);
      out["properties"] = std::move(props);
      break;
    }
    case TypeTag::Array:
    case TypeTag::Multiset:
      out["type"] = "array";
      if (node.has_item()) out["items"] = emit_node(node.item.front());
      if (node.tag == TypeTag::Multiset) out["x-collection"] = "multiset";
      break;
    case TypeTag::Union: {
      ordered_json alts = ordered_json::array();
      for (const auto& alt : node.alternatives) alts.push_back(emit_node(alt));
      out["oneOf"] = std::move(alts);
      break;
    }
    default:
      out["type"] = std::string(tag_name(node.tag));
      break;
  }
  return out;
}

[[noreturn]] void bad_schema(const std::string& what) {
  throw Error(ErrorCode::SchemaParse, "JSON Schema subset: " + what);
}

SisNode parse_node(const nlohmann::json& s, bool is_root) {
  if (!s.is_object()) bad_schema("schema node must be a JSON object");

  for (const auto& [key, value] : s.items()) {
    (void)value;
    if (key == "type" || key == "properties" || key == "items" || key == "oneOf" ||
        key == "x-collection") {
      continue;
    }
    if (is_root && (key == "$schema" || key == "$id" || key == "title")) continue;
    bad_schema("unsupported keyword '" + key + "'");
  }

  if (const auto one_of = s.find("oneOf"); one_of != s.end()) {
    if (s.contains("type") || s.contains("properties") || s.contains("items")) {
      bad_schema("'oneOf' cannot be combined with other keywords");
    }
    if (!one_of->is_array()) bad_schema("'oneOf' must be an array");
    std::vector<SisNode> alts;
    for (const auto& alt : *one_of) {
      SisNode n = parse_node(alt, false);
      if (n.tag == TypeTag::Union) bad_schema("nested 'oneOf'");
      alts.push_back(std::move(n));
    }
    try {
      return union_from_alternatives(std::move(alts));
    } catch (const Error& e) {
      bad_schema(e.what());
    }
  }

  const auto type_it = s.find("type");
  if (type_it == s.end() || !type_it->is_string()) bad_schema("missing string 'type'");
  const std::string& type = type_it->get_ref<const std::string&>();

  if (type == "object") {
    if (s.contains("items") || s.contains("x-collection")) {
      bad_schema("array keywords on an object schema");
    }
    const auto props = s.find("properties");
    if (props == s.end() || !props->is_object()) {
      bad_schema("object schema requires a 'properties' object");
    }
    std::vector<std::pair<std::string, SisNode>> fields;
    for (const auto& [name, child] : props->items()) {
      fields.emplace_back(name, parse_node(child, false));
    }
    return make_object(std::move(fields));
  }

  if (type == "array") {
    if (s.contains("properties")) bad_schema("'properties' on an array schema");
    bool multiset = false;
    if (const auto coll = s.find("x-collection"); coll != s.end()) {
      if (!coll->is_string() || coll->get_ref<const std::string&>() != "multiset") {
        bad_schema("unsupported 'x-collection' value");
      }
      multiset = true;
    }
    std::optional<SisNode> item;
    if (const auto items = s.find("items"); items != s.end()) {
      item = parse_node(*items, false);
    }
    return multiset ? make_multiset(std::move(item)) : make_array(std::move(item));
  }

  const auto tag = tag_from_name(type);
  if (!tag || *tag >= TypeTag::Object) bad_schema("unsupported type name '" + type + "'");
  if (s.contains("properties") || s.contains("items") || s.contains("x-collection")) {
    bad_schema("composite keywords on a primitive schema");
  }
  return make_primitive(*tag);
}

}  // namespace

std::string JsonSchemaDoc::to_string() const { return body.dump(2) + "\n"; }

JsonSchemaDoc to_json_schema(const SisNode& root, const EmitMeta& meta) {
  const SisNode canon = canonicalize(root);
  ordered_json body;
  body["$schema"] = meta.schema_uri;
  if (meta.id) body["$id"] = *meta.id;
  if (meta.title) body["title"] = *meta.title;
  ordered_json keywords = emit_node(canon);
  for (auto& [key, value] : keywords.items()) {
    body[key] = std::move(value);
  }
  return JsonSchemaDoc{std::move(body), meta};
}

SisNode sis_from_json_schema(const nlohmann::json& schema_doc) {
  SisNode node = canonicalize(parse_node(schema_doc, true));
  check_invariants(node);
  return node;
}

}  // namespace jsinfer
