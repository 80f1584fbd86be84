#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vspec/backends/doc.hpp"
#include "vspec/core/shape.hpp"
#include "vspec/core/whnf.hpp"
#include "vspec/diagnostics.hpp"
#include "vspec/itp_ir/builtins.hpp"
#include "vspec/rational.hpp"

// Helpers shared by the four emitters. Everything here is pure over the
// immutable IR spec, so emitters stay independently callable.

namespace vspec::backends::detail {

using itp_ir::DecidabilityBuiltin;
using itp_ir::IrDecl;
using itp_ir::IrExpr;
using itp_ir::IrSpec;
using itp_ir::TypeHead;

inline IrExpr norm(const IrSpec& spec, const IrExpr& e, std::uint32_t depth) {
  return core::whnf(e, spec.decls, depth);
}

inline const core::StandardBuiltin* std_builtin(const IrExpr& e) {
  auto* b = e.builtin_value();
  return b ? b->standard() : nullptr;
}

inline const TypeHead* type_head(const IrExpr& e) {
  auto* b = e.builtin_value();
  return b ? b->type_head() : nullptr;
}

inline bool is_head(const IrExpr& e, core::StdHead h) {
  auto* s = std_builtin(e);
  return s && s->is_head(h);
}

inline std::optional<std::uint64_t> nat_of(const IrSpec& spec, const IrExpr& e,
                                           std::uint32_t depth) {
  auto* s = std_builtin(norm(spec, e, depth));
  if (!s) return std::nullopt;
  if (auto* n = s->nat_lit()) return n->value;
  return std::nullopt;
}

/// Concrete dims of `Tensor Real <shape>`, after normalisation. Scalars
/// give an empty list; non-tensor types give nullopt.
inline std::optional<std::vector<std::uint64_t>> tensor_dims(const IrSpec& spec,
                                                             const IrExpr& ty,
                                                             std::uint32_t depth) {
  auto nf = [&](const IrExpr& x) { return norm(spec, x, depth); };
  return core::tensor_real_dims(nf(ty), nf);
}

/// Reads the shape list out of an implicit spine argument (the {ds} of the
/// tensor-polymorphic primitives). Emission requires it to be concrete.
inline std::vector<std::uint64_t> implicit_dims(const IrSpec& spec,
                                                const core::Spine<DecidabilityBuiltin>& sp,
                                                std::size_t implicit_index,
                                                std::uint32_t depth,
                                                const std::string& what) {
  std::size_t seen = 0;
  for (const auto& a : sp.args) {
    if (a.mode != core::BinderMode::Implicit) continue;
    if (seen++ != implicit_index) continue;
    auto nf = [&](const IrExpr& x) { return norm(spec, x, depth); };
    auto dims = core::shape_dims(nf(a.expr), nf);
    if (!dims)
      throw Error(ErrorCode::TranslationError,
                  "cannot emit " + what + ": tensor shape is not concrete");
    return *dims;
  }
  throw Error(ErrorCode::TranslationError,
              "cannot emit " + what + ": elaborated shape argument is missing");
}

inline std::vector<core::SpineArg<DecidabilityBuiltin>> explicit_args(
    const core::Spine<DecidabilityBuiltin>& sp) {
  std::vector<core::SpineArg<DecidabilityBuiltin>> out;
  for (const auto& a : sp.args)
    if (a.mode == core::BinderMode::Explicit) out.push_back(a);
  return out;
}

struct PeeledLams {
  std::vector<std::string> binders;
  IrExpr body;
};

/// Strips the leading explicit lambdas off a definition body; these become
/// left-hand-side parameters. Implicit lambdas should not survive
/// monomorphisation.
inline PeeledLams peel_lams(const IrExpr& body, const std::string& decl_name) {
  PeeledLams out{{}, body};
  IrExpr cur = body;
  while (auto* lam = cur.get_if<IrExpr::Lam>()) {
    if (lam->mode != core::BinderMode::Explicit)
      throw Error(ErrorCode::TranslationError,
                  "non-explicit binder survived monomorphisation in '" +
                      decl_name + "'");
    out.binders.push_back(lam->binder);
    cur = lam->body;
  }
  out.body = cur;
  return out;
}

struct PiParam {
  std::string binder;
  IrExpr domain;
};

struct PiChain {
  std::vector<PiParam> params;
  IrExpr result;
};

/// Flattens the explicit, non-dependent arrow spine of a declaration type.
inline PiChain flatten_pi(const IrSpec& spec, const IrExpr& ty,
                          const std::string& decl_name) {
  PiChain out{{}, ty};
  IrExpr cur = ty;
  for (;;) {
    cur = norm(spec, cur, static_cast<std::uint32_t>(out.params.size()));
    auto* pi = cur.get_if<IrExpr::Pi>();
    if (!pi) break;
    if (pi->mode != core::BinderMode::Explicit)
      throw Error(ErrorCode::TranslationError,
                  "non-explicit binder survived monomorphisation in the type of '" +
                      decl_name + "'");
    out.params.push_back({pi->binder, pi->domain});
    cur = pi->codomain;
  }
  out.result = cur;
  return out;
}

/// Binder naming for one emitted file: declaration names and target
/// keywords are taken; local binders keep their hint unless it collides,
/// in which case a numeric suffix disambiguates. Variable references above
/// the binder depth resolve against the declaration prefix of the
/// declaration currently being rendered (`set_decl`).
class NameScope {
 public:
  NameScope(std::vector<std::string> decl_names, std::set<std::string> reserved)
      : decl_names_(std::move(decl_names)), taken_(std::move(reserved)) {
    for (const auto& n : decl_names_) taken_.insert(n);
  }

  void set_decl(std::size_t index) { prefix_ = index; }

  std::string push(const std::string& hint) {
    std::string base = hint.empty() || hint == "_" ? "x" : hint;
    std::string name = base;
    for (int i = 1; taken_.count(name) || in_scope(name); ++i)
      name = base + std::to_string(i);
    binders_.push_back(name);
    return name;
  }

  /// Push a binder under its exact name, shadowing any declaration with the
  /// same name. Used when a parameter must echo a fixed global name.
  void push_exact(const std::string& name) { binders_.push_back(name); }

  void pop() { binders_.pop_back(); }

  std::uint32_t depth() const { return static_cast<std::uint32_t>(binders_.size()); }

  /// Binder name, or the referenced declaration's name; `decl_out` reports
  /// which declaration a cross-declaration reference points at.
  std::string var(std::uint32_t index, std::optional<std::size_t>* decl_out) const {
    if (index < binders_.size()) {
      if (decl_out) *decl_out = std::nullopt;
      return binders_[binders_.size() - 1 - index];
    }
    std::size_t back = index - binders_.size();
    if (back >= prefix_)
      throw Error(ErrorCode::TranslationError, "unbound variable in elaborated code");
    std::size_t decl_index = prefix_ - 1 - back;
    if (decl_out) *decl_out = decl_index;
    return decl_names_[decl_index];
  }

 private:
  bool in_scope(const std::string& n) const {
    return std::find(binders_.begin(), binders_.end(), n) != binders_.end();
  }

  std::vector<std::string> decl_names_;
  std::set<std::string> taken_;
  std::vector<std::string> binders_;
  std::size_t prefix_ = 0;
};

/// Scalar rational broken into rendering parts. `decimal` is set when the
/// value has a finite decimal expansion.
struct LitParts {
  bool negative;
  std::string num;
  std::string den;
  bool integral;
  std::optional<std::string> decimal;
};

inline LitParts lit_parts(const Rational& r) {
  Rational abs = r < Rational(0) ? -r : r;
  LitParts out;
  out.negative = r < Rational(0);
  out.num = abs.numerator_str();
  out.den = abs.denominator_str();
  out.integral = abs.is_integer();
  out.decimal = abs.to_decimal_string();
  return out;
}

inline std::string escape_string(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

/// Declaration indices whose bodies or types mention declaration `target`.
inline std::set<std::size_t> decl_refs(const IrSpec& spec, std::size_t decl_index) {
  std::set<std::size_t> out;
  const IrDecl& d = spec.decls[decl_index];
  auto scan = [&](const std::optional<IrExpr>& e) {
    if (!e) return;
    std::function<void(const IrExpr&, std::uint32_t)> go =
        [&](const IrExpr& x, std::uint32_t depth) {
          if (auto* v = x.get_if<IrExpr::Var>()) {
            if (v->index >= depth) {
              std::size_t back = v->index - depth;
              if (back < decl_index) out.insert(decl_index - 1 - back);
            }
            return;
          }
          if (auto* pi = x.get_if<IrExpr::Pi>()) {
            go(pi->domain, depth);
            go(pi->codomain, depth + 1);
          } else if (auto* lam = x.get_if<IrExpr::Lam>()) {
            if (lam->annotation) go(*lam->annotation, depth);
            go(lam->body, depth + 1);
          } else if (auto* app = x.get_if<IrExpr::App>()) {
            go(app->fn, depth);
            go(app->arg, depth);
          }
        };
    go(*e, 0);
  };
  scan(d.type);
  scan(d.body);
  return out;
}

inline std::vector<std::string> decl_names(const IrSpec& spec) {
  std::vector<std::string> out;
  out.reserve(spec.decls.size());
  for (const auto& d : spec.decls) out.push_back(d.name);
  return out;
}

inline Doc txt(std::string s) { return Doc::text(std::move(s)); }

inline Doc parens(Doc d) { return txt("(") + std::move(d) + txt(")"); }

inline Doc maybe_parens(bool cond, Doc d) {
  return cond ? parens(std::move(d)) : d;
}

/// `lhs op rhs`, breaking before the operator with a two-space hang.
inline Doc binop(Doc lhs, const std::string& op, Doc rhs) {
  return Doc::group(std::move(lhs) +
                    Doc::nest(2, Doc::line() + txt(op + " ") + std::move(rhs)));
}

/// Application spine `head a b ...` with hanging arguments.
inline Doc app_doc(Doc head, std::vector<Doc> args) {
  Doc body = std::move(head);
  for (auto& a : args) body = std::move(body) + Doc::nest(2, Doc::line() + std::move(a));
  return Doc::group(std::move(body));
}

inline Doc join(std::vector<Doc> parts, const std::string& sep) {
  Doc out;
  bool first = true;
  for (auto& p : parts) {
    if (!first) out = std::move(out) + txt(sep);
    out = std::move(out) + std::move(p);
    first = false;
  }
  return out;
}

}  // namespace vspec::backends::detail
