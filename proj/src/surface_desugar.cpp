#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/diagnostics.hpp"
#include "vspec/surface/surface.hpp"

namespace vspec::surface {
namespace {

using B = core::StandardBuiltin;
using E = core::Expr<B>;
using H = core::StdHead;

struct Scope {
  std::vector<std::string> decls;    // emitted core declarations, in order
  std::vector<std::string> binders;  // innermost binder last
  std::map<std::string, const SurfaceType*> aliases;
};

E bi(H h, Span s) { return E::builtin(B(h), s); }

E shape_expr(const std::vector<std::uint64_t>& dims, Span s) {
  E list = bi(H::Nil, s);
  for (std::size_t i = dims.size(); i-- > 0;)
    list = E::apps(bi(H::Cons, s),
                   {E::builtin(B(core::NatLit{dims[i]}), s), std::move(list)});
  return list;
}

E desugar_type(const SurfaceType& t, const Scope& sc, bool elem_position) {
  using K = SurfaceType::Kind;
  switch (t.kind) {
    case K::Bool: return bi(H::Bool, t.span);
    case K::Real:
      // A bare Real is the zero-dimensional real tensor; the raw head only
      // appears as a tensor element type.
      if (elem_position) return bi(H::Real, t.span);
      return E::apps(bi(H::Tensor, t.span),
                     {bi(H::Real, t.span), shape_expr({}, t.span)});
    case K::Tensor:
      return E::apps(bi(H::Tensor, t.span),
                     {desugar_type(t.kids[0], sc, true),
                      shape_expr(t.dims, t.span)});
    case K::Index:
      return E::app(bi(H::Index, t.span),
                    E::builtin(B(core::NatLit{t.bound}), t.span), t.span);
    case K::Arrow:
      return E::arrow(desugar_type(t.kids[0], sc, false),
                      desugar_type(t.kids[1], sc, false), t.span);
    case K::Named: {
      auto it = sc.aliases.find(t.name);
      if (it == sc.aliases.end())
        throw Error(ErrorCode::UnboundVariable,
                    "unknown type '" + t.name + "'", t.span);
      return desugar_type(*it->second, sc, elem_position);
    }
  }
  throw Error(ErrorCode::UnboundVariable, "unreachable", t.span);
}

E negated_literal(const Rational& r, Span s) {
  return E::builtin(B(core::TensorLit{{}, {-r}}), s);
}

E desugar_expr(const SurfaceExpr& e, Scope& sc) {
  using K = SurfaceExpr::Kind;
  using O = SurfaceExpr::BinOp;
  switch (e.kind) {
    case K::Var: {
      for (std::size_t i = sc.binders.size(); i-- > 0;)
        if (sc.binders[i] == e.name)
          return E::var(static_cast<std::uint32_t>(sc.binders.size() - 1 - i),
                        e.span);
      for (std::size_t j = sc.decls.size(); j-- > 0;)
        if (sc.decls[j] == e.name)
          return E::var(static_cast<std::uint32_t>(sc.binders.size() +
                                                   sc.decls.size() - 1 - j),
                        e.span);
      if (sc.aliases.count(e.name))
        throw Error(ErrorCode::UnboundVariable,
                    "type alias '" + e.name +
                        "' cannot be used in an expression",
                    e.span);
      throw Error(ErrorCode::UnboundVariable,
                  "'" + e.name + "' is not defined here", e.span);
    }
    case K::BoolLit: return E::builtin(B(core::BoolLit{e.bvalue}), e.span);
    case K::NatLit: return E::builtin(B(core::NatLit{e.nvalue}), e.span);
    case K::RealLit:
      return E::builtin(B(core::TensorLit{{}, {e.rvalue}}), e.span);
    case K::App:
      return E::app(desugar_expr(e.kids[0], sc), desugar_expr(e.kids[1], sc),
                    e.span);
    case K::Not:
      return E::app(bi(H::Not, e.span), desugar_expr(e.kids[0], sc), e.span);
    case K::Negate: {
      const SurfaceExpr& inner = e.kids[0];
      if (inner.kind == K::RealLit) return negated_literal(inner.rvalue, e.span);
      if (inner.kind == K::NatLit)
        return negated_literal(*Rational::parse(std::to_string(inner.nvalue)),
                               e.span);
      return E::app(bi(H::Neg, e.span), desugar_expr(inner, sc), e.span);
    }
    case K::Binary: {
      E l = desugar_expr(e.kids[0], sc);
      E r = desugar_expr(e.kids[1], sc);
      H h;
      bool flip = false;
      switch (e.op) {
        case O::And: h = H::And; break;
        case O::Or: h = H::Or; break;
        case O::Implies: h = H::Implies; break;
        case O::Leq: h = H::Leq; break;
        case O::Lt: h = H::Lt; break;
        case O::Geq: h = H::Leq; flip = true; break;
        case O::Gt: h = H::Lt; flip = true; break;
        case O::Eq: h = H::Eq; break;
        case O::Neq: h = H::Neq; break;
        case O::Add: h = H::Add; break;
        case O::Sub: h = H::Sub; break;
        case O::Mul: h = H::Mul; break;
        case O::Div: h = H::Div; break;
      }
      if (flip) std::swap(l, r);
      return E::apps(bi(h, e.span), {std::move(l), std::move(r)});
    }
    case K::If:
      return E::apps(bi(H::If, e.span),
                     {desugar_expr(e.kids[0], sc), desugar_expr(e.kids[1], sc),
                      desugar_expr(e.kids[2], sc)});
    case K::Forall: {
      sc.binders.push_back(e.name);
      E body = desugar_expr(e.kids[0], sc);
      sc.binders.pop_back();
      return E::app(bi(H::Forall, e.span),
                    E::lam(e.name, core::BinderMode::Explicit, std::nullopt,
                           std::move(body), e.span),
                    e.span);
    }
    case K::Let: {
      E bound = desugar_expr(e.kids[0], sc);
      sc.binders.push_back(e.name);
      E body = desugar_expr(e.kids[1], sc);
      sc.binders.pop_back();
      return E::app(E::lam(e.name, core::BinderMode::Explicit, std::nullopt,
                           std::move(body), e.span),
                    std::move(bound), e.span);
    }
    case K::Vec: {
      std::vector<E> elems;
      elems.reserve(e.kids.size());
      for (const SurfaceExpr& k : e.kids) elems.push_back(desugar_expr(k, sc));
      return E::apps(
          E::builtin(
              B(core::StackOp{static_cast<std::uint32_t>(e.kids.size())}),
              e.span),
          elems);
    }
    case K::Lookup:
      return E::apps(bi(H::Lookup, e.span), {desugar_expr(e.kids[0], sc),
                                             desugar_expr(e.kids[1], sc)});
  }
  throw Error(ErrorCode::UnboundVariable, "unreachable", e.span);
}

/// Tensor-of-Real shape named by an alias, chasing alias references.
std::optional<std::vector<std::uint64_t>> alias_shape(const SurfaceType& t,
                                                      const Scope& sc) {
  if (t.kind == SurfaceType::Kind::Tensor &&
      t.kids[0].kind == SurfaceType::Kind::Real)
    return t.dims;
  if (t.kind == SurfaceType::Kind::Real) return std::vector<std::uint64_t>{};
  if (t.kind == SurfaceType::Kind::Named) {
    auto it = sc.aliases.find(t.name);
    if (it != sc.aliases.end()) return alias_shape(*it->second, sc);
  }
  return std::nullopt;
}

}  // namespace

core::Spec<B> desugar(const SurfaceSpec& spec) {
  core::Spec<B> out;
  Scope sc;

  for (const SurfaceDecl& d : spec.decls) {
    switch (d.kind) {
      case SurfaceDecl::Kind::TypeAlias: {
        sc.aliases[d.name()] = &*d.type;
        if (auto dims = alias_shape(*d.type, sc))
          out.aliases.push_back(core::TensorAlias{d.name(), *dims});
        break;
      }
      case SurfaceDecl::Kind::FunctionDef: {
        core::Decl<B> cd;
        cd.kind = core::DeclKind::Function;
        cd.name = d.name();
        cd.origin = d.name();
        cd.span = d.span;
        if (d.type) cd.type = desugar_type(*d.type, sc, false);
        for (const std::string& p : d.params) sc.binders.push_back(p);
        E body = desugar_expr(*d.body, sc);
        for (std::size_t i = d.params.size(); i-- > 0;) {
          sc.binders.pop_back();
          body = E::lam(d.params[i], core::BinderMode::Explicit, std::nullopt,
                        std::move(body), d.span);
        }
        cd.body = std::move(body);
        out.decls.push_back(std::move(cd));
        sc.decls.push_back(d.name());
        break;
      }
      case SurfaceDecl::Kind::Network: {
        core::Decl<B> cd;
        cd.kind = core::DeclKind::Network;
        cd.name = d.name();
        cd.origin = d.name();
        cd.span = d.span;
        cd.type = desugar_type(*d.type, sc, false);
        out.decls.push_back(std::move(cd));
        sc.decls.push_back(d.name());
        break;
      }
      case SurfaceDecl::Kind::Parameter: {
        E ty = desugar_type(*d.type, sc, false);
        for (const std::string& nm : d.names) {
          core::Decl<B> cd;
          cd.kind = core::DeclKind::Parameter;
          cd.name = nm;
          cd.origin = nm;
          cd.span = d.span;
          cd.type = ty;
          out.decls.push_back(std::move(cd));
          sc.decls.push_back(nm);
        }
        break;
      }
      case SurfaceDecl::Kind::Property: {
        core::Decl<B> cd;
        cd.kind = core::DeclKind::Property;
        cd.name = d.name();
        cd.origin = d.name();
        cd.span = d.span;
        cd.body = desugar_expr(*d.body, sc);
        out.decls.push_back(std::move(cd));
        sc.decls.push_back(d.name());
        break;
      }
    }
  }
  return out;
}

}  // namespace vspec::surface
