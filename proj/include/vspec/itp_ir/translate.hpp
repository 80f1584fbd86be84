#pragma once

#include "vspec/core/expr_ops.hpp"
#include "vspec/itp_ir/builtins.hpp"
#include "vspec/typecheck/monomorphise.hpp"
#include "vspec/typecheck/pipeline.hpp"

namespace vspec::itp_ir {

/// Full translation to the prover-facing language: elaborate the scope
/// resolved spec over the decidability alphabet, then monomorphise away
/// every instance choice. The output is what every backend consumes.
inline IrSpec to_itp_ir(const core::Spec<core::StandardBuiltin>& desugared) {
  IrSpec elaborated = typecheck::type_spec<DecidabilityBuiltin>(desugared);
  IrSpec mono = typecheck::monomorphise(elaborated);
  for (const IrDecl& d : mono.decls) {
    auto ambiguous = [](const std::optional<IrExpr>& e) {
      return e && core::contains_instance_meta(*e);
    };
    if (ambiguous(d.type) || ambiguous(d.body))
      throw Error(ErrorCode::TranslationError,
                  "instance choice in '" + d.name +
                      "' survived monomorphisation",
                  d.span);
  }
  return mono;
}

/// The standard-alphabet pipeline: elaboration plus the (identity, absent
/// instance polymorphism) monomorphisation pass, so both alphabets go
/// through the same stages.
inline core::Spec<core::StandardBuiltin> elaborate_standard(
    const core::Spec<core::StandardBuiltin>& desugared) {
  return typecheck::monomorphise(
      typecheck::type_spec<core::StandardBuiltin>(desugared));
}

}  // namespace vspec::itp_ir
