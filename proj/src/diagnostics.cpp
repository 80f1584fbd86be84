#include "vspec/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace vspec {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnificationFailure: return "UnificationFailure";
    case ErrorCode::OccursCheckFailure: return "OccursCheckFailure";
    case ErrorCode::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnresolvableConstraint: return "UnresolvableConstraint";
    case ErrorCode::NetworkTypeInvalid: return "NetworkTypeInvalid";
    case ErrorCode::NonConcreteShape: return "NonConcreteShape";
    case ErrorCode::TranslationError: return "TranslationError";
    case ErrorCode::UnboundNetwork: return "UnboundNetwork";
    case ErrorCode::ForallNotEvaluable: return "ForallNotEvaluable";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::MissingNetworkBinding: return "MissingNetworkBinding";
    case ErrorCode::MissingCache: return "MissingCache";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::MockFileMissingProperty: return "MockFileMissingProperty";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

SourceMap::SourceMap(std::string_view source) {
  line_starts_.push_back(0);
  for (std::uint32_t i = 0; i < source.size(); ++i)
    if (source[i] == '\n') line_starts_.push_back(i + 1);
}

SourceMap::Pos SourceMap::locate(std::uint32_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  std::uint32_t line = static_cast<std::uint32_t>(it - line_starts_.begin());
  std::uint32_t col = offset - line_starts_[line - 1] + 1;
  return {line, col};
}

std::string render_error(const Error& err, std::string_view file_name,
                         std::string_view source) {
  SourceMap map(source);
  auto pos = map.locate(err.span.begin);
  std::ostringstream os;
  os << file_name << ":" << pos.line << ":" << pos.column << ": error ["
     << error_code_name(err.code) << "]: " << err.what();
  return os.str();
}

}  // namespace vspec
