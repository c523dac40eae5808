#pragma once

#include <stdexcept>
#include <string>

namespace jsinfer {

enum class ErrorCode {
  Usage,

  // input / filesystem
  Io,
  JsonParse,
  NotARecord,

  // SIS interchange
  SisMalformed,
  SisUnknownTag,
  SisSingletonUnion,
  SisDuplicateKind,
  SisNestedUnion,

  // declared-schema metadata
  MetaParse,
  MetaDuplicateField,
  MetaUnknownType,

  // emitted JSON Schema subset reader
  SchemaParse,

  // precondition violations
  Contract,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jsinfer
