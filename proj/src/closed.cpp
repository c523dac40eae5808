#include "jsinfer/closed.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jsinfer/error.hpp"

namespace jsinfer {

namespace {

using nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void meta_error(const std::string& what) {
  throw Error(ErrorCode::MetaParse, "declared-schema metadata: " + what);
}

DeclaredType parse_type(const json& v, const std::string& at) {
  if (!v.is_object()) meta_error("type at " + at + " must be a JSON object");
  const auto kind_it = v.find("kind");
  if (kind_it == v.end() || !kind_it->is_string()) {
    meta_error("type at " + at + " requires a string 'kind'");
  }
  const std::string& kind = kind_it->get_ref<const std::string&>();

  DeclaredType out;
  if (kind == "object") {
    out.kind = TypeTag::Object;
    const auto fields_it = v.find("fields");
    if (fields_it == v.end() || !fields_it->is_array()) {
      meta_error("object type at " + at + " requires a 'fields' array");
    }
    std::set<std::string, std::less<>> seen;
    for (const auto& f : *fields_it) {
      if (!f.is_object()) meta_error("field entry at " + at + " must be a JSON object");
      const auto name_it = f.find("name");
      if (name_it == f.end() || !name_it->is_string()) {
        meta_error("field entry at " + at + " requires a string 'name'");
      }
      DeclaredField field;
      field.name = name_it->get<std::string>();
      if (!seen.insert(field.name).second) {
        throw Error(ErrorCode::MetaDuplicateField,
                    "declared-schema metadata: duplicate field '" + field.name + "' at " + at);
      }
      if (const auto opt_it = f.find("optional"); opt_it != f.end()) {
        if (!opt_it->is_boolean()) meta_error("'optional' of field '" + field.name +
                                              "' must be a boolean");
        field.optional = opt_it->get<bool>();
      }
      const auto type_it = f.find("type");
      if (type_it == f.end()) meta_error("field '" + field.name + "' requires a 'type'");
      field.type = parse_type(*type_it, at + "." + field.name);
      out.fields.push_back(std::move(field));
    }
    return out;
  }

  if (kind == "array" || kind == "multiset") {
    out.kind = kind == "array" ? TypeTag::Array : TypeTag::Multiset;
    const auto of_it = v.find("of");
    if (of_it == v.end()) meta_error(kind + " type at " + at + " requires 'of'");
    out.element.push_back(parse_type(*of_it, at + "[]"));
    return out;
  }

  const auto tag = tag_from_name(kind);
  if (!tag || *tag >= TypeTag::Object) {
    throw Error(ErrorCode::MetaUnknownType,
                "declared-schema metadata: unknown type name '" + kind + "' at " + at);
  }
  out.kind = *tag;
  return out;
}

SisNode type_to_sis(const DeclaredType& t) {
  switch (t.kind) {
    case TypeTag::Object: {
      std::vector<std::pair<std::string, SisNode>> fields;
      fields.reserve(t.fields.size());
      for (const auto& f : t.fields) fields.emplace_back(f.name, type_to_sis(f.type));
      return make_object(std::move(fields));
    }
    case TypeTag::Array:
      return make_array(type_to_sis(t.element.front()));
    case TypeTag::Multiset:
      return make_multiset(type_to_sis(t.element.front()));
    default:
      return make_primitive(t.kind);
  }
}

}  // namespace

DeclaredSchema parse_declared_schema(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    meta_error("invalid JSON at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
               e.what());
  }
  if (!doc.is_object()) meta_error("document must be a JSON object");

  DeclaredSchema out;
  const auto name_it = doc.find("dataset");
  if (name_it == doc.end() || !name_it->is_string()) meta_error("requires a string 'dataset'");
  out.dataset_name = name_it->get<std::string>();
  if (out.dataset_name.empty()) meta_error("'dataset' must be non-empty");

  const auto open_it = doc.find("openness");
  if (open_it == doc.end() || !open_it->is_string()) {
    meta_error("requires 'openness' of \"open\" or \"closed\"");
  }
  const std::string& openness = open_it->get_ref<const std::string&>();
  if (openness == "open") {
    out.openness = Openness::Open;
  } else if (openness == "closed") {
    out.openness = Openness::Closed;
  } else {
    meta_error("'openness' must be \"open\" or \"closed\", got \"" + openness + "\"");
  }

  const auto type_it = doc.find("type");
  if (type_it == doc.end()) meta_error("requires a 'type'");
  out.root = parse_type(*type_it, "$");
  return out;
}

DeclaredSchema load_declared_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open metadata file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read metadata file '" + path + "'");
  return parse_declared_schema(buf.str());
}

SisNode declared_to_sis(const DeclaredSchema& schema) {
  return canonicalize(type_to_sis(schema.root));
}

}  // namespace jsinfer
