#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vspec {

/// Half-open byte range into a source buffer.
struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  static Span join(Span a, Span b) {
    if (a.begin == 0 && a.end == 0) return b;
    if (b.begin == 0 && b.end == 0) return a;
    return {std::min(a.begin, b.begin), std::max(a.end, b.end)};
  }
};

enum class ErrorCode {
  SyntaxError,
  DuplicateDeclaration,
  UnboundVariable,
  TypeMismatch,
  UnificationFailure,
  OccursCheckFailure,
  IndexOutOfBounds,
  ShapeMismatch,
  UnresolvableConstraint,
  NetworkTypeInvalid,
  NonConcreteShape,
  TranslationError,
  UnboundNetwork,
  ForallNotEvaluable,
  EvalError,
  MissingParameter,
  MissingNetworkBinding,
  MissingCache,
  IntegrityFailure,
  MockFileMissingProperty,
  SolverFailure,
  IoError,
  UsageError,
};

const char* error_code_name(ErrorCode code);

/// Single error type for the whole pipeline. `code` drives both test
/// assertions and the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, Span span = {})
      : std::runtime_error(std::move(message)), code(code), span(span) {}

  ErrorCode code;
  Span span;
};

/// Maps byte offsets to 1-based line/column for rendering messages.
class SourceMap {
 public:
  explicit SourceMap(std::string_view source);

  struct Pos {
    std::uint32_t line;
    std::uint32_t column;
  };
  Pos locate(std::uint32_t offset) const;

 private:
  std::vector<std::uint32_t> line_starts_;
};

/// "<file>:<line>:<col>: error [<code>]: <message>"
std::string render_error(const Error& err, std::string_view file_name,
                         std::string_view source);

}  // namespace vspec
