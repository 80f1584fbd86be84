#pragma once

#include <string>
#include <variant>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"

namespace vspec::itp_ir {

/// Type-level twins of the Boolean operations. A proposition built from
/// these is a type whose inhabitation expresses the property, which is what
/// provers consume for undecidable goals.
enum class TypeHead : std::uint8_t {
  TrueType,
  FalseType,
  NotType,      // Type -> Type
  AndType,      // Type -> Type -> Type
  OrType,
  ImpliesType,
  LeqType,      // {ds} -> Tensor Real ds -> Tensor Real ds -> Type
  LtType,
  EqType,
  NeqType,
};

/// Members of the Booleans type class. Every Boolean operation in the
/// source is elaborated to one of these applied to an instance argument;
/// solving then commits each use site to Bool or Type.
enum class ClassMember : std::uint8_t {
  BoolTC,
  TrueTC,
  FalseTC,
  NotTC,
  AndTC,
  OrTC,
  ImpliesTC,
  LeqTC,
  LtTC,
  EqTC,
  NeqTC,
};

/// The sort of class instances; BI and TI are its only inhabitants.
struct BooleansClassType {
  bool operator==(const BooleansClassType&) const = default;
};

struct DecidabilityBuiltin {
  std::variant<core::StandardBuiltin, TypeHead, ClassMember, BooleansClassType,
               core::InstanceTag>
      v;

  DecidabilityBuiltin(core::StandardBuiltin b) : v(std::move(b)) {}
  DecidabilityBuiltin(core::StdHead h) : v(core::StandardBuiltin(h)) {}
  DecidabilityBuiltin(core::NatLit n) : v(core::StandardBuiltin(n)) {}
  DecidabilityBuiltin(core::BoolLit b) : v(core::StandardBuiltin(b)) {}
  DecidabilityBuiltin(core::TensorLit t) : v(core::StandardBuiltin(std::move(t))) {}
  DecidabilityBuiltin(core::StackOp s) : v(core::StandardBuiltin(s)) {}
  DecidabilityBuiltin(TypeHead h) : v(h) {}
  DecidabilityBuiltin(ClassMember m) : v(m) {}
  DecidabilityBuiltin(BooleansClassType c) : v(c) {}
  DecidabilityBuiltin(core::InstanceTag t) : v(t) {}

  bool operator==(const DecidabilityBuiltin&) const = default;

  const core::StandardBuiltin* standard() const {
    return std::get_if<core::StandardBuiltin>(&v);
  }
  const TypeHead* type_head() const { return std::get_if<TypeHead>(&v); }
  const ClassMember* class_member() const { return std::get_if<ClassMember>(&v); }
  bool is_class_type() const { return std::holds_alternative<BooleansClassType>(v); }
  const core::InstanceTag* instance_tag() const {
    return std::get_if<core::InstanceTag>(&v);
  }

  bool is_std_head(core::StdHead h) const {
    auto* s = standard();
    return s && s->is_head(h);
  }
};

const char* type_head_name(TypeHead h);
const char* class_member_name(ClassMember m);
std::string builtin_name(const DecidabilityBuiltin& b);

using IrExpr = core::Expr<DecidabilityBuiltin>;
using IrDecl = core::Decl<DecidabilityBuiltin>;
using IrSpec = core::Spec<DecidabilityBuiltin>;

/// Implementation of a class member in one of the two instances. BI maps
/// onto the executable Boolean builtins, TI onto the type-level twins.
IrExpr member_impl(ClassMember m, core::InstanceTag tag);

/// Type of a member under an instance binder: BoolTC gets {{i}} -> Type,
/// value members get boolTC {{i}}-shaped signatures.
IrExpr member_class_type(ClassMember m);

/// The descriptor used by elaboration and tests: the class has exactly
/// these members and exactly the two instances.
struct BooleansClassDescriptor {
  static constexpr ClassMember members[] = {
      ClassMember::BoolTC, ClassMember::TrueTC,  ClassMember::FalseTC,
      ClassMember::NotTC,  ClassMember::AndTC,   ClassMember::OrTC,
      ClassMember::ImpliesTC, ClassMember::LeqTC, ClassMember::LtTC,
      ClassMember::EqTC,   ClassMember::NeqTC,
  };
  static constexpr core::InstanceTag instances[] = {core::InstanceTag::BI,
                                                    core::InstanceTag::TI};
};

}  // namespace vspec::itp_ir

namespace vspec::core {

template <>
struct AlphabetTraits<itp_ir::DecidabilityBuiltin> {
  using B = itp_ir::DecidabilityBuiltin;
  using E = Expr<B>;
  using T = TypeBuilders<B>;

  static constexpr bool has_instances = true;

  static E type_of(const B& b);
  static E property_sort() { return E::universe(); }

  /// Boolean-fragment builtins become class members applied to a fresh
  /// instance metavariable; everything else embeds unchanged.
  static E convert_builtin(const StandardBuiltin& b, Span s, InstanceMetaMinter& mint);

  /// Resolves a class member applied to a concrete instance tag.
  static std::optional<HeadReduction<E>> reduce(const B& head,
                                                const std::vector<E>& args);

  static std::optional<InstanceTag> tag_of_rigid_sort(const E& whnf_rigid) {
    if (whnf_rigid.is_universe()) return InstanceTag::TI;
    if (auto* b = whnf_rigid.builtin_value())
      if (b->is_std_head(StdHead::Bool)) return InstanceTag::BI;
    return std::nullopt;
  }

  static bool is_bool_tc(const B& b) {
    auto* m = b.class_member();
    return m && *m == itp_ir::ClassMember::BoolTC;
  }

  static std::optional<std::uint64_t> nat_literal(const B& b) {
    if (auto* s = b.standard())
      if (auto* n = s->nat_lit()) return n->value;
    return std::nullopt;
  }

  static E tag_expr(InstanceTag t) { return E::builtin(B(t)); }
  static std::optional<InstanceTag> as_tag(const E& e) {
    if (auto* b = e.builtin_value())
      if (auto* t = b->instance_tag()) return *t;
    return std::nullopt;
  }
  static E instance_class_type() { return E::builtin(B(itp_ir::BooleansClassType{})); }
};

}  // namespace vspec::core
