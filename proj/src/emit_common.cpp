#include "vspec/backends/emit.hpp"

#include "vspec/diagnostics.hpp"

namespace vspec::backends {

std::optional<EmitTarget::Kind> parse_target_name(const std::string& name) {
  if (name == "Agda") return EmitTarget::Kind::Agda;
  if (name == "Rocq") return EmitTarget::Kind::Rocq;
  if (name == "Isabelle") return EmitTarget::Kind::Isabelle;
  if (name == "Imandra") return EmitTarget::Kind::Imandra;
  return std::nullopt;
}

const char* target_name(EmitTarget::Kind k) {
  switch (k) {
    case EmitTarget::Kind::Agda: return "Agda";
    case EmitTarget::Kind::Rocq: return "Rocq";
    case EmitTarget::Kind::Isabelle: return "Isabelle";
    case EmitTarget::Kind::Imandra: return "Imandra";
  }
  return "?";
}

const char* file_extension(EmitTarget::Kind k) {
  switch (k) {
    case EmitTarget::Kind::Agda: return ".agda";
    case EmitTarget::Kind::Rocq: return ".v";
    case EmitTarget::Kind::Isabelle: return ".thy";
    case EmitTarget::Kind::Imandra: return ".iml";
  }
  return "";
}

std::string emit(const EmitTarget& target, const itp_ir::IrSpec& spec,
                 const EmitInfo& info, const std::optional<AgdaCacheRef>& cache) {
  switch (target.kind) {
    case EmitTarget::Kind::Agda: return emit_agda(spec, info, cache);
    case EmitTarget::Kind::Rocq: return emit_rocq(spec, info, target.constructive_reals);
    case EmitTarget::Kind::Isabelle: return emit_isabelle(spec, info);
    case EmitTarget::Kind::Imandra: return emit_imandra(spec, info);
  }
  throw Error(ErrorCode::UsageError, "unknown export target");
}

}  // namespace vspec::backends
