#pragma once

#include <string>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/core/shape.hpp"
#include "vspec/typecheck/constraints.hpp"
#include "vspec/typecheck/meta_store.hpp"

namespace vspec::typecheck {

/// Bidirectional elaborator for a single declaration against the prefix of
/// already-elaborated declarations. It inserts implicit shape arguments and
/// instance arguments at use sites, replaces bare numeric literals by holes
/// tied to NatLiteral constraints, and emits Unify constraints instead of
/// solving: the fixpoint solver runs afterwards.
template <class B>
class Checker {
 public:
  using E = core::Expr<B>;
  using Traits = core::AlphabetTraits<B>;

  Checker(const std::vector<core::Decl<B>>& prefix, MetaStore<B>& metas,
          std::vector<Constraint<B>>& out)
      : prefix_(prefix), metas_(metas), out_(out) {}

  core::Decl<B> check_decl(const core::Decl<B>& decl) {
    core::Decl<B> result = decl;
    switch (decl.kind) {
      case core::DeclKind::Function: {
        if (decl.type) {
          E type = check(*decl.type, E::universe());
          result.type = type;
          if (decl.body) result.body = check(*decl.body, type);
        } else {
          if (!decl.body)
            throw Error(ErrorCode::TypeMismatch,
                        "declaration '" + decl.name + "' has neither type nor body",
                        decl.span);
          E type = E::universe();
          result.body = infer(*decl.body, type);
          result.type = type;
        }
        break;
      }
      case core::DeclKind::Network:
      case core::DeclKind::Parameter: {
        // Shape and scalar validation happens in the pipeline once the
        // declaration's literals have been solved and written back.
        result.type = check(*decl.type, E::universe());
        break;
      }
      case core::DeclKind::Property: {
        E sort = Traits::property_sort();
        result.body = check(*decl.body, sort);
        result.type = sort;
        break;
      }
    }
    return result;
  }

 private:
  std::uint32_t depth() const { return static_cast<std::uint32_t>(locals_.size()); }

  E normalize(const E& e) const { return metas_.normalize(e, prefix_, depth()); }

  void emit_unify(E lhs, E rhs, Span origin) {
    out_.push_back(UnifyConstraint<B>{std::move(lhs), std::move(rhs), depth(), origin});
  }

  E fresh_instance_arg(Span s) {
    core::InstanceMetaMinter minter;
    minter.next = metas_.instance_count();
    std::uint32_t id = minter.fresh();
    metas_.register_instance_metas(1);
    out_.push_back(Constraint<B>{BooleansConstraint{id, s}});
    return E::instance_meta(id, s);
  }

  /// Type of a variable: local binders first, then declarations. Both are
  /// stored at the scope of their introduction, so the shift is uniform.
  E var_type(std::uint32_t index, Span s) {
    if (index < depth())
      return core::shift(locals_[locals_.size() - 1 - index],
                         static_cast<std::int32_t>(index + 1));
    std::uint32_t back = index - depth();
    if (back >= prefix_.size())
      throw Error(ErrorCode::UnboundVariable, "variable index out of scope", s);
    const core::Decl<B>& d = prefix_[prefix_.size() - 1 - back];
    return core::shift(*d.type, static_cast<std::int32_t>(index + 1));
  }

  E check(const E& e, const E& expected) {
    // Lambdas are checked against the expected function type; this is where
    // desugared parameter binders get their domains.
    if (auto* lam = e.template get_if<typename E::Lam>()) {
      E norm = normalize(expected);
      if (auto* pi = norm.template get_if<typename E::Pi>()) {
        if (pi->mode != lam->mode && lam->mode == core::BinderMode::Explicit &&
            pi->mode != core::BinderMode::Explicit)
          throw Error(ErrorCode::TypeMismatch,
                      "expected an implicit binder, found an explicit one", e.span());
        if (lam->annotation) emit_unify(*lam->annotation, pi->domain, e.span());
        locals_.push_back(pi->domain);
        E body = check(lam->body, pi->codomain);
        locals_.pop_back();
        return E::lam(lam->binder, pi->mode, pi->domain, std::move(body), e.span());
      }
      if (norm.template get_if<typename E::Meta>()) {
        E dom = E::meta(metas_.fresh_meta(e.span()), e.span());
        E cod = E::meta(metas_.fresh_meta(e.span()), e.span());
        emit_unify(norm, E::arrow(dom, core::shift(cod, 1)), e.span());
        locals_.push_back(dom);
        E body = check(lam->body, core::shift(cod, 1));
        locals_.pop_back();
        return E::lam(lam->binder, lam->mode, dom, std::move(body), e.span());
      }
      throw Error(ErrorCode::TypeMismatch, "lambda where a non-function is expected",
                  e.span());
    }

    if (auto* b = e.template get_if<typename E::Builtin>()) {
      if (auto lit = Traits::nat_literal(b->value)) {
        std::uint32_t hole = metas_.fresh_meta(e.span());
        out_.push_back(Constraint<B>{
            NatLiteralConstraint<B>{*lit, hole, expected, depth(), e.span()}});
        return E::meta(hole, e.span());
      }
    }

    E type = E::universe();
    E elab = infer(e, type);
    insert_trailing(elab, type, e.span());
    emit_unify(type, expected, e.span());
    return elab;
  }

  /// Inference; `type_out` receives the inferred type. Application spines
  /// insert implicit and instance arguments as the head's type demands.
  E infer(const E& e, E& type_out) {
    using Node = typename E::Node;
    const Node& node = e.node();

    if (std::holds_alternative<typename E::Universe>(node)) {
      type_out = E::universe();
      return e;
    }
    if (auto* v = std::get_if<typename E::Var>(&node)) {
      type_out = var_type(v->index, e.span());
      return e;
    }
    if (auto* b = std::get_if<typename E::Builtin>(&node)) {
      if (auto lit = Traits::nat_literal(b->value)) {
        std::uint32_t hole = metas_.fresh_meta(e.span());
        std::uint32_t tmeta = metas_.fresh_meta(e.span());
        out_.push_back(Constraint<B>{NatLiteralConstraint<B>{
            *lit, hole, E::meta(tmeta, e.span()), depth(), e.span()}});
        type_out = E::meta(tmeta, e.span());
        return E::meta(hole, e.span());
      }
      type_out = Traits::type_of(b->value);
      return e;
    }
    if (std::get_if<typename E::InstanceMeta>(&node)) {
      type_out = Traits::instance_class_type();
      return e;
    }
    if (std::get_if<typename E::Meta>(&node))
      throw Error(ErrorCode::TypeMismatch, "cannot infer a type for a hole", e.span());

    if (auto* pi = std::get_if<typename E::Pi>(&node)) {
      E dom = check(pi->domain, E::universe());
      locals_.push_back(dom);
      E cod = check(pi->codomain, E::universe());
      locals_.pop_back();
      type_out = E::universe();
      return E::pi(pi->binder, pi->mode, std::move(dom), std::move(cod), e.span());
    }

    if (auto* lam = std::get_if<typename E::Lam>(&node)) {
      if (!lam->annotation)
        throw Error(ErrorCode::TypeMismatch,
                    "cannot infer the type of an unannotated binder", e.span());
      E dom = check(*lam->annotation, E::universe());
      locals_.push_back(dom);
      E body_type = E::universe();
      E body = infer(lam->body, body_type);
      locals_.pop_back();
      type_out = E::pi(lam->binder, lam->mode, dom, body_type, e.span());
      return E::lam(lam->binder, lam->mode, dom, std::move(body), e.span());
    }

    // Application spine.
    core::Spine<B> sp = core::spine_view(e);

    // A redex applying an unannotated lambda is a desugared `let`: type the
    // bound expression first and use its type as the binder's domain.
    if (auto* lam = sp.head.template get_if<typename E::Lam>();
        lam && !lam->annotation && sp.args.size() == 1) {
      E arg_type = E::universe();
      E arg = infer(sp.args[0].expr, arg_type);
      insert_trailing(arg, arg_type, e.span());
      locals_.push_back(arg_type);
      E body_type = E::universe();
      E body = infer(lam->body, body_type);
      locals_.pop_back();
      type_out = core::instantiate(body_type, arg);
      return E::app(E::lam(lam->binder, lam->mode, arg_type, std::move(body),
                           sp.head.span()),
                    std::move(arg), e.span());
    }

    E head_type = E::universe();
    E elab = infer(sp.head, head_type);

    std::size_t next = 0;
    for (;;) {
      E norm = normalize(head_type);
      auto* pi = norm.template get_if<typename E::Pi>();

      if (pi && pi->mode != core::BinderMode::Explicit &&
          (next >= sp.args.size() || sp.args[next].mode != pi->mode)) {
        E arg = pi->mode == core::BinderMode::Instance
                    ? fresh_instance_arg(e.span())
                    : E::meta(metas_.fresh_meta(e.span()), e.span());
        elab = E::app_m(std::move(elab), arg, pi->mode, e.span());
        head_type = core::instantiate(pi->codomain, arg);
        continue;
      }
      if (next >= sp.args.size()) break;

      const core::SpineArg<B>& a = sp.args[next];
      if (pi) {
        if (pi->mode != a.mode)
          throw Error(ErrorCode::TypeMismatch,
                      "argument binder mode does not match the function type",
                      a.expr.span());
        E arg = check(a.expr, pi->domain);
        elab = E::app_m(std::move(elab), arg, a.mode, e.span());
        head_type = core::instantiate(pi->codomain, arg);
        ++next;
        continue;
      }
      if (norm.template get_if<typename E::Meta>()) {
        E dom = E::meta(metas_.fresh_meta(e.span()), e.span());
        E cod = E::meta(metas_.fresh_meta(e.span()), e.span());
        emit_unify(norm, E::arrow(dom, core::shift(cod, 1)), e.span());
        E arg = check(a.expr, dom);
        elab = E::app_m(std::move(elab), arg, a.mode, e.span());
        head_type = cod;
        ++next;
        continue;
      }
      throw Error(ErrorCode::TypeMismatch, "expression applied as a function",
                  a.expr.span());
    }

    type_out = head_type;
    return elab;
  }

  /// After inference, saturate any leading implicit/instance binders left in
  /// the type; bare references to generalised declarations get their
  /// instance arguments here.
  void insert_trailing(E& elab, E& type, Span s) {
    for (;;) {
      E norm = normalize(type);
      auto* pi = norm.template get_if<typename E::Pi>();
      if (!pi || pi->mode == core::BinderMode::Explicit) {
        type = norm;
        return;
      }
      E arg = pi->mode == core::BinderMode::Instance
                  ? fresh_instance_arg(s)
                  : E::meta(metas_.fresh_meta(s), s);
      elab = E::app_m(std::move(elab), arg, pi->mode, s);
      type = core::instantiate(pi->codomain, arg);
    }
  }

  const std::vector<core::Decl<B>>& prefix_;
  MetaStore<B>& metas_;
  std::vector<Constraint<B>>& out_;
  std::vector<E> locals_;
};

/// Shape-validation of a solved, zonked network type. Runs after the
/// declaration's own constraints are discharged, so literal dimensions have
/// been written back into the type.
template <class B>
void validate_network_type(const core::Decl<B>& decl, const core::Expr<B>& type,
                           const std::vector<core::Decl<B>>& decls) {
  using E = core::Expr<B>;
  auto norm = [&](const E& x) { return core::whnf(x, decls, 0); };
  E n = norm(type);
  auto* pi = n.template get_if<typename E::Pi>();
  if (!pi || pi->mode != core::BinderMode::Explicit ||
      core::depends_on_var0(pi->codomain))
    throw Error(ErrorCode::NetworkTypeInvalid,
                "network '" + decl.name +
                    "' must have a type of the form Tensor Real ds1 -> "
                    "Tensor Real ds2",
                decl.span);
  for (const E& side : {pi->domain, core::shift(pi->codomain, -1)}) {
    if (!core::tensor_real_dims(norm(side), norm))
      throw Error(ErrorCode::NetworkTypeInvalid,
                  "network '" + decl.name +
                      "' must map tensors of concrete shape to tensors of "
                      "concrete shape",
                  decl.span);
  }
}

template <class B>
void validate_parameter_type(const core::Decl<B>& decl, const core::Expr<B>& type,
                             const std::vector<core::Decl<B>>& decls) {
  using E = core::Expr<B>;
  auto norm = [&](const E& x) { return core::whnf(x, decls, 0); };
  auto dims = core::tensor_real_dims(norm(type), norm);
  if (!dims || !dims->empty())
    throw Error(ErrorCode::TypeMismatch,
                "parameter '" + decl.name + "' must have type Real", decl.span);
}

}  // namespace vspec::typecheck
