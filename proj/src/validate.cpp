#include "jsinfer/validate.hpp"

#include "jsinfer/infer.hpp"

namespace jsinfer {

namespace {

using nlohmann::json;

bool check(const json& v, const SisNode& s, const std::string* path, ViolationDetail* out);

bool mismatch(const std::string* path, ViolationDetail* out, std::string message) {
  if (out && path) *out = ViolationDetail{*path, std::move(message)};
  return false;
}

bool check(const json& v, const SisNode& s, const std::string* path, ViolationDetail* out) {
  const TypeTag vt = tag_of_value(v);

  switch (s.tag) {
    case TypeTag::Union:
      for (const SisNode& alt : s.alternatives) {
        if (check(v, alt, nullptr, nullptr)) return true;
      }
      return mismatch(path, out,
                      "value of type '" + std::string(tag_name(vt)) +
                          "' matches no union alternative");
    case TypeTag::Object: {
      if (vt != TypeTag::Object) {
        return mismatch(path, out, "expected object, got " + std::string(tag_name(vt)));
      }
      for (const auto& [name, child] : v.items()) {
        const SisNode* field = s.find_field(name);
        if (!field) {
          return mismatch(path, out, "field '" + name + "' not present in schema");
        }
        if (path) {
          const std::string child_path = *path + "/" + name;
          if (!check(child, *field, &child_path, out)) return false;
        } else if (!check(child, *field, nullptr, nullptr)) {
          return false;
        }
      }
      return true;
    }
    case TypeTag::Array:
    case TypeTag::Multiset: {
      if (vt != TypeTag::Array) {
        return mismatch(path, out, "expected array, got " + std::string(tag_name(vt)));
      }
      if (!s.has_item()) {
        return v.empty() ||
               mismatch(path, out, "schema admits no elements but the array is non-empty");
      }
      std::size_t index = 0;
      for (const auto& elem : v) {
        if (path) {
          const std::string child_path = *path + "/" + std::to_string(index);
          if (!check(elem, s.item.front(), &child_path, out)) return false;
        } else if (!check(elem, s.item.front(), nullptr, nullptr)) {
          return false;
        }
        ++index;
      }
      return true;
    }
    default:
      if (vt != s.tag) {
        return mismatch(path, out,
                        "expected " + std::string(tag_name(s.tag)) + ", got " +
                            std::string(tag_name(vt)));
      }
      return true;
  }
}

}  // namespace

bool conforms(const json& v, const SisNode& s) { return check(v, s, nullptr, nullptr); }

std::optional<ViolationDetail> explain_violation(const json& v, const SisNode& s) {
  ViolationDetail detail;
  const std::string root;
  if (check(v, s, &root, &detail)) return std::nullopt;
  if (detail.path.empty()) detail.path = "/";
  return detail;
}

}  // namespace jsinfer
