#include "vspec/itp_ir/builtins.hpp"

namespace vspec::itp_ir {

using core::InstanceTag;
using core::StdHead;
using E = IrExpr;
using T = core::TypeBuilders<DecidabilityBuiltin>;

const char* type_head_name(TypeHead h) {
  switch (h) {
    case TypeHead::TrueType: return "TrueType";
    case TypeHead::FalseType: return "FalseType";
    case TypeHead::NotType: return "NotType";
    case TypeHead::AndType: return "AndType";
    case TypeHead::OrType: return "OrType";
    case TypeHead::ImpliesType: return "ImpliesType";
    case TypeHead::LeqType: return "LeqType";
    case TypeHead::LtType: return "LtType";
    case TypeHead::EqType: return "EqType";
    case TypeHead::NeqType: return "NeqType";
  }
  return "?";
}

const char* class_member_name(ClassMember m) {
  switch (m) {
    case ClassMember::BoolTC: return "boolTC";
    case ClassMember::TrueTC: return "trueTC";
    case ClassMember::FalseTC: return "falseTC";
    case ClassMember::NotTC: return "notTC";
    case ClassMember::AndTC: return "andTC";
    case ClassMember::OrTC: return "orTC";
    case ClassMember::ImpliesTC: return "impliesTC";
    case ClassMember::LeqTC: return "leqTC";
    case ClassMember::LtTC: return "ltTC";
    case ClassMember::EqTC: return "eqTC";
    case ClassMember::NeqTC: return "neqTC";
  }
  return "?";
}

std::string builtin_name(const DecidabilityBuiltin& b) {
  if (auto* s = b.standard()) return core::builtin_name(*s);
  if (auto* h = b.type_head()) return type_head_name(*h);
  if (auto* m = b.class_member()) return class_member_name(*m);
  if (b.is_class_type()) return "Booleans";
  return core::instance_tag_name(*b.instance_tag());
}

IrExpr member_impl(ClassMember m, InstanceTag tag) {
  if (tag == InstanceTag::BI) {
    switch (m) {
      case ClassMember::BoolTC: return T::embed(StdHead::Bool);
      case ClassMember::TrueTC: return T::embed(core::BoolLit{true});
      case ClassMember::FalseTC: return T::embed(core::BoolLit{false});
      case ClassMember::NotTC: return T::embed(StdHead::Not);
      case ClassMember::AndTC: return T::embed(StdHead::And);
      case ClassMember::OrTC: return T::embed(StdHead::Or);
      case ClassMember::ImpliesTC: return T::embed(StdHead::Implies);
      case ClassMember::LeqTC: return T::embed(StdHead::Leq);
      case ClassMember::LtTC: return T::embed(StdHead::Lt);
      case ClassMember::EqTC: return T::embed(StdHead::Eq);
      case ClassMember::NeqTC: return T::embed(StdHead::Neq);
    }
  } else {
    switch (m) {
      case ClassMember::BoolTC: return E::universe();
      case ClassMember::TrueTC: return E::builtin(TypeHead::TrueType);
      case ClassMember::FalseTC: return E::builtin(TypeHead::FalseType);
      case ClassMember::NotTC: return E::builtin(TypeHead::NotType);
      case ClassMember::AndTC: return E::builtin(TypeHead::AndType);
      case ClassMember::OrTC: return E::builtin(TypeHead::OrType);
      case ClassMember::ImpliesTC: return E::builtin(TypeHead::ImpliesType);
      case ClassMember::LeqTC: return E::builtin(TypeHead::LeqType);
      case ClassMember::LtTC: return E::builtin(TypeHead::LtType);
      case ClassMember::EqTC: return E::builtin(TypeHead::EqType);
      case ClassMember::NeqTC: return E::builtin(TypeHead::NeqType);
    }
  }
  return E::universe();
}

namespace {

E bool_tc_at(std::uint32_t instance_var) {
  return E::app_m(E::builtin(ClassMember::BoolTC), E::var(instance_var),
                  core::BinderMode::Instance);
}

}  // namespace

IrExpr member_class_type(ClassMember m) {
  E body = [&]() -> E {
    switch (m) {
      case ClassMember::BoolTC:
        return E::universe();
      case ClassMember::TrueTC:
      case ClassMember::FalseTC:
        return bool_tc_at(0);
      case ClassMember::NotTC:
        return E::arrow(bool_tc_at(0), bool_tc_at(1));
      case ClassMember::AndTC:
      case ClassMember::OrTC:
      case ClassMember::ImpliesTC:
        return E::arrow(bool_tc_at(0), E::arrow(bool_tc_at(1), bool_tc_at(2)));
      case ClassMember::LeqTC:
      case ClassMember::LtTC:
      case ClassMember::EqTC:
      case ClassMember::NeqTC:
        return T::implicit_pi(
            "ds", T::list_nat(),
            E::arrow(T::tensor_real(E::var(0)),
                     E::arrow(T::tensor_real(E::var(1)), bool_tc_at(3))));
    }
    return E::universe();
  }();
  return E::pi("i", core::BinderMode::Instance,
               E::builtin(BooleansClassType{}), std::move(body));
}

}  // namespace vspec::itp_ir

namespace vspec::core {

using itp_ir::ClassMember;
using itp_ir::DecidabilityBuiltin;
using itp_ir::TypeHead;
using Traits = AlphabetTraits<DecidabilityBuiltin>;
using E = Traits::E;
using T = Traits::T;

E Traits::type_of(const B& b) {
  if (auto* s = b.standard()) {
    // Forall quantifies a type-level predicate in this alphabet; every
    // other standard builtin keeps its standard type.
    if (s->is_head(StdHead::Forall))
      return T::implicit_pi(
          "ds", T::list_nat(),
          E::arrow(E::arrow(T::tensor_real(E::var(0)), E::universe()),
                   E::universe()));
    return T::standard_type(*s);
  }
  if (auto* h = b.type_head()) {
    switch (*h) {
      case TypeHead::TrueType:
      case TypeHead::FalseType:
        return E::universe();
      case TypeHead::NotType:
        return E::arrow(E::universe(), E::universe());
      case TypeHead::AndType:
      case TypeHead::OrType:
      case TypeHead::ImpliesType:
        return E::arrow(E::universe(), E::arrow(E::universe(), E::universe()));
      case TypeHead::LeqType:
      case TypeHead::LtType:
      case TypeHead::EqType:
      case TypeHead::NeqType:
        return T::shaped_binop(E::universe());
    }
  }
  if (auto* m = b.class_member()) return itp_ir::member_class_type(*m);
  if (b.is_class_type()) return E::universe();
  return E::builtin(B(itp_ir::BooleansClassType{}));  // instance tags
}

E Traits::convert_builtin(const StandardBuiltin& b, Span s, InstanceMetaMinter& mint) {
  auto member_with_meta = [&](ClassMember m) {
    return E::app_m(E::builtin(B(m), s), E::instance_meta(mint.fresh(), s),
                    BinderMode::Instance, s);
  };
  if (auto* bl = b.bool_lit())
    return member_with_meta(bl->value ? ClassMember::TrueTC : ClassMember::FalseTC);
  if (auto* h = std::get_if<StdHead>(&b.v)) {
    switch (*h) {
      case StdHead::Bool: return member_with_meta(ClassMember::BoolTC);
      case StdHead::Not: return member_with_meta(ClassMember::NotTC);
      case StdHead::And: return member_with_meta(ClassMember::AndTC);
      case StdHead::Or: return member_with_meta(ClassMember::OrTC);
      case StdHead::Implies: return member_with_meta(ClassMember::ImpliesTC);
      case StdHead::Leq: return member_with_meta(ClassMember::LeqTC);
      case StdHead::Lt: return member_with_meta(ClassMember::LtTC);
      case StdHead::Eq: return member_with_meta(ClassMember::EqTC);
      case StdHead::Neq: return member_with_meta(ClassMember::NeqTC);
      default: break;
    }
  }
  return E::builtin(B(b), s);
}

std::optional<HeadReduction<E>> Traits::reduce(const B& head,
                                               const std::vector<E>& args) {
  auto* m = head.class_member();
  if (!m || args.empty()) return std::nullopt;
  auto tag = as_tag(args[0]);
  if (!tag) return std::nullopt;
  return HeadReduction<E>{itp_ir::member_impl(*m, *tag), 1};
}

}  // namespace vspec::core
