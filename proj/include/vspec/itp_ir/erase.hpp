#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/diagnostics.hpp"
#include "vspec/itp_ir/builtins.hpp"

namespace vspec::itp_ir {

/// Undoes the decidability split: type-level twins collapse onto their
/// Boolean builtins, the standard embedding is stripped, and specialised
/// copies merge back into one declaration per origin. The result of erasing
/// a translated spec must be alpha-equal to the standard elaboration of the
/// same input; the merge checks that equality copy by copy.
///
/// Universe maps to Bool. In monomorphised output the sort only survives as
/// the residue of a type-level instance (`boolTC {{TI}}` reduced) or as a
/// property's assigned sort, and both stand for Bool on the standard side.
inline core::Expr<core::StandardBuiltin> erase_expr(const IrExpr& e) {
  using E = core::Expr<core::StandardBuiltin>;
  using H = core::StdHead;
  if (e.template get_if<IrExpr::Universe>())
    return E::builtin(core::StandardBuiltin(H::Bool), e.span());
  if (auto* v = e.template get_if<IrExpr::Var>())
    return E::var(v->index, e.span());
  if (auto* p = e.template get_if<IrExpr::Pi>())
    return E::pi(p->binder, p->mode, erase_expr(p->domain),
                 erase_expr(p->codomain), e.span());
  if (auto* l = e.template get_if<IrExpr::Lam>()) {
    std::optional<E> ann;
    if (l->annotation) ann = erase_expr(*l->annotation);
    return E::lam(l->binder, l->mode, std::move(ann), erase_expr(l->body),
                  e.span());
  }
  if (auto* a = e.template get_if<IrExpr::App>())
    return E::app_m(erase_expr(a->fn), erase_expr(a->arg), a->mode, e.span());
  if (auto* bn = e.template get_if<IrExpr::Builtin>()) {
    const DecidabilityBuiltin& b = bn->value;
    if (auto* s = b.standard()) return E::builtin(*s, e.span());
    if (auto* h = b.type_head()) {
      switch (*h) {
        case TypeHead::TrueType:
          return E::builtin(core::StandardBuiltin(core::BoolLit{true}),
                            e.span());
        case TypeHead::FalseType:
          return E::builtin(core::StandardBuiltin(core::BoolLit{false}),
                            e.span());
        case TypeHead::NotType:
          return E::builtin(core::StandardBuiltin(H::Not), e.span());
        case TypeHead::AndType:
          return E::builtin(core::StandardBuiltin(H::And), e.span());
        case TypeHead::OrType:
          return E::builtin(core::StandardBuiltin(H::Or), e.span());
        case TypeHead::ImpliesType:
          return E::builtin(core::StandardBuiltin(H::Implies), e.span());
        case TypeHead::LeqType:
          return E::builtin(core::StandardBuiltin(H::Leq), e.span());
        case TypeHead::LtType:
          return E::builtin(core::StandardBuiltin(H::Lt), e.span());
        case TypeHead::EqType:
          return E::builtin(core::StandardBuiltin(H::Eq), e.span());
        case TypeHead::NeqType:
          return E::builtin(core::StandardBuiltin(H::Neq), e.span());
      }
    }
    throw Error(ErrorCode::TranslationError,
                "class operation '" + builtin_name(b) +
                    "' survived monomorphisation",
                e.span());
  }
  throw Error(ErrorCode::TranslationError,
              "unsolved metavariable in translated output", e.span());
}

/// Merges the specialised copies of each declaration (identified by their
/// origin) back into one, remapping declaration references. Copies that do
/// not erase to alpha-equal declarations are a translation soundness bug.
inline core::Spec<core::StandardBuiltin> erase(const IrSpec& s) {
  using E = core::Expr<core::StandardBuiltin>;
  const std::size_t n = s.decls.size();

  std::vector<std::size_t> merged_index(n);
  std::map<std::string, std::size_t> slot_of_origin;
  std::size_t next_slot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& origin =
        s.decls[i].origin.empty() ? s.decls[i].name : s.decls[i].origin;
    auto [it, fresh] = slot_of_origin.try_emplace(origin, next_slot);
    if (fresh) ++next_slot;
    merged_index[i] = it->second;
  }

  core::Spec<core::StandardBuiltin> out;
  out.aliases = s.aliases;
  out.decls.resize(next_slot);
  std::vector<bool> filled(next_slot, false);

  for (std::size_t i = 0; i < n; ++i) {
    const core::Decl<DecidabilityBuiltin>& d = s.decls[i];
    const std::size_t slot = merged_index[i];

    std::function<E(const E&, std::uint32_t)> go =
        [&](const E& ex, std::uint32_t depth) -> E {
      if (auto* v = ex.template get_if<E::Var>()) {
        if (v->index < depth) return ex;
        std::size_t old_j = i - 1 - (v->index - depth);
        std::uint32_t nv = depth + static_cast<std::uint32_t>(
                                       slot - 1 - merged_index[old_j]);
        return E::var(nv, ex.span());
      }
      if (auto* p = ex.template get_if<E::Pi>())
        return E::pi(p->binder, p->mode, go(p->domain, depth),
                     go(p->codomain, depth + 1), ex.span());
      if (auto* l = ex.template get_if<E::Lam>()) {
        std::optional<E> ann;
        if (l->annotation) ann = go(*l->annotation, depth);
        return E::lam(l->binder, l->mode, std::move(ann),
                      go(l->body, depth + 1), ex.span());
      }
      if (auto* a = ex.template get_if<E::App>())
        return E::app_m(go(a->fn, depth), go(a->arg, depth), a->mode,
                        ex.span());
      return ex;
    };
    auto remap = [&](const E& e) { return go(e, 0); };

    core::Decl<core::StandardBuiltin> ed;
    ed.kind = d.kind;
    ed.name = d.origin.empty() ? d.name : d.origin;
    ed.origin = ed.name;
    ed.span = d.span;
    if (d.type) ed.type = remap(erase_expr(*d.type));
    if (d.body) ed.body = remap(erase_expr(*d.body));

    if (!filled[slot]) {
      out.decls[slot] = std::move(ed);
      filled[slot] = true;
      continue;
    }
    const core::Decl<core::StandardBuiltin>& kept = out.decls[slot];
    auto same = [](const std::optional<E>& a, const std::optional<E>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || core::alpha_eq(*a, *b);
    };
    if (kept.kind != ed.kind || !same(kept.type, ed.type) ||
        !same(kept.body, ed.body))
      throw Error(ErrorCode::TranslationError,
                  "specialised copies of '" + ed.name +
                      "' do not erase to the same declaration",
                  d.span);
  }
  return out;
}

}  // namespace vspec::itp_ir
