#include <sstream>

#include "emit_util.hpp"
#include "vspec/backends/emit.hpp"

// Agda backend. Dependent types make this the one-to-one target: BI
// operators render as Boolean functions, TI operators as type formers, and
// the two never share a symbol. Properties keep their elaborated statement
// as the Agda type; the body defers to the verification cache through the
// checkVehicleProperty macro from the companion library.

namespace vspec::backends {

namespace {

using namespace detail;

// Precedence levels; higher binds tighter. Operands are rendered one
// level above their operator's level on the non-associative side.
constexpr int kTop = 0;
constexpr int kQuant = 5;
constexpr int kArrow = 10;
constexpr int kOr = 25;
constexpr int kAnd = 30;
constexpr int kCmp = 40;
constexpr int kAdd = 50;
constexpr int kMul = 60;
constexpr int kLookup = 70;
constexpr int kNegate = 75;
constexpr int kApp = 90;
constexpr int kAtom = 100;

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{
      "let",      "in",        "where",  "with",   "module", "open",
      "import",   "postulate", "record", "data",   "if",     "then",
      "else",     "forall",    "Set",    "not",    "true",   "false",
      "stack",    "tensorFromVec",       "callNetwork",
      "checkVehicleProperty"};
  return kw;
}

class AgdaEmitter {
 public:
  AgdaEmitter(const IrSpec& spec, const EmitInfo& info,
              const std::optional<AgdaCacheRef>& cache)
      : spec_(spec), info_(info), cache_(cache),
        scope_(decl_names(spec), keywords()) {}

  std::string run() {
    for (const auto& d : spec_.decls)
      if (keywords().count(d.name))
        throw Error(ErrorCode::TranslationError,
                    "declaration name '" + d.name + "' is reserved in Agda");
    if (!cache_) {
      for (const auto& d : spec_.decls)
        if (d.kind == core::DeclKind::Property)
          throw Error(ErrorCode::MissingCache,
                      "exporting to Agda requires a verification cache: property '" +
                          d.name + "' refers to it");
    }

    Doc out = txt("-- Generated by vspec.") + Doc::hard_line() +
              txt("-- Spec source sha256: " + info_.spec_hash) + Doc::hard_line() +
              txt("module " + info_.module_name + " where") + Doc::hard_line() +
              Doc::hard_line() + txt("open import Vehicle") + Doc::hard_line();
    for (std::size_t i = 0; i < spec_.decls.size(); ++i) {
      scope_.set_decl(i);
      out = std::move(out) + Doc::hard_line() + decl(i) + Doc::hard_line();
    }
    return render(out, 100);
  }

 private:
  Doc decl(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    switch (d.kind) {
      case core::DeclKind::Network: {
        std::string path = d.name;
        if (cache_) {
          auto it = cache_->network_paths.find(d.name);
          if (it != cache_->network_paths.end()) path = it->second;
        }
        return txt(d.name + " : ") + type(*d.type) + Doc::hard_line() +
               txt(d.name + " = callNetwork \"" + escape_string(path) + "\"");
      }
      case core::DeclKind::Property:
        return Doc::group(txt(d.name + " :") +
                          Doc::nest(2, Doc::line() + expr(*d.body, kTop))) +
               Doc::hard_line() +
               txt(d.name + " = checkVehicleProperty \"" +
                   escape_string(cache_->cache_path) + "\" \"" +
                   escape_string(d.name) + "\"");
      case core::DeclKind::Parameter:
        if (!d.body) return txt("postulate " + d.name + " : ") + type(*d.type);
        [[fallthrough]];
      case core::DeclKind::Function: {
        if (!d.body)
          throw Error(ErrorCode::TranslationError,
                      "definition '" + d.name + "' has no body to emit");
        PeeledLams peeled = peel_lams(*d.body, d.name);
        Doc head = txt(d.name);
        std::vector<std::string> names;
        for (const auto& b : peeled.binders) {
          names.push_back(scope_.push(b));
          head = std::move(head) + txt(" " + names.back());
        }
        Doc body = Doc::group(std::move(head) + txt(" =") +
                              Doc::nest(2, Doc::line() + expr(peeled.body, kTop)));
        for (std::size_t k = 0; k < names.size(); ++k) scope_.pop();
        return Doc::group(txt(d.name + " :") +
                          Doc::nest(2, Doc::line() + type(*d.type))) +
               Doc::hard_line() + std::move(body);
      }
    }
    throw Error(ErrorCode::TranslationError, "unknown declaration kind");
  }

  Doc type(const IrExpr& t) { return type_at(t, kTop); }

  Doc type_at(const IrExpr& t, int prec) {
    IrExpr nf = norm(spec_, t, scope_.depth());
    if (nf.is_universe()) return txt("Set");
    if (auto* pi = nf.get_if<IrExpr::Pi>()) {
      if (pi->mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "non-explicit binder survived monomorphisation");
      Doc lhs = type_at(pi->domain, kArrow + 1);
      scope_.push(pi->binder);
      Doc rhs = type_at(pi->codomain, kArrow);
      scope_.pop();
      return maybe_parens(prec > kArrow,
                          binop(std::move(lhs), "→", std::move(rhs)));
    }
    if (auto dims = tensor_dims(spec_, nf, scope_.depth())) {
      if (dims->empty()) return txt("ℝ");
      return maybe_parens(prec > kApp,
                          txt("Tensor ℝ " + shape_list(*dims)));
    }
    if (is_head(nf, core::StdHead::Bool)) return txt("Bool");
    if (is_head(nf, core::StdHead::Nat)) return txt("ℕ");
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(nf);
    if (is_head(sp.head, core::StdHead::Index) && sp.args.size() == 1) {
      auto n = nat_of(spec_, sp.args[0].expr, scope_.depth());
      if (n) return maybe_parens(prec > kApp, txt("Index " + std::to_string(*n)));
    }
    // Type-level propositions (property statements) reuse the term renderer.
    return expr_at(nf, prec);
  }

  static std::string shape_list(const std::vector<std::uint64_t>& dims) {
    std::string out = "(";
    for (auto d : dims) out += std::to_string(d) + " ∷ ";
    out += "[])";
    return out;
  }

  Doc expr(const IrExpr& e, int prec) { return expr_at(e, prec); }

  Doc lit(const Rational& r, int prec) {
    LitParts p = lit_parts(r);
    Doc mag = p.integral ? txt(p.num) : parens(txt(p.num + " / " + p.den));
    if (!p.negative) return mag;
    return maybe_parens(prec > kNegate, txt("- ") + std::move(mag));
  }

  Doc expr_at(const IrExpr& e, int prec) {
    if (auto* v = e.get_if<IrExpr::Var>()) {
      std::optional<std::size_t> decl_index;
      return txt(scope_.var(v->index, &decl_index));
    }
    if (e.is_universe()) return txt("Set");
    if (e.get_if<IrExpr::Pi>()) return type_at(e, prec);
    if (auto* lam = e.get_if<IrExpr::Lam>()) {
      std::string name = scope_.push(lam->binder);
      Doc body = expr_at(lam->body, kQuant);
      scope_.pop();
      return maybe_parens(prec > kQuant,
                          Doc::group(txt("λ " + name + " →") +
                                     Doc::nest(2, Doc::line() + std::move(body))));
    }
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(e);
    // A lambda applied to one value is a surface `let` that elaboration
    // left in place.
    if (auto* lam = sp.head.get_if<IrExpr::Lam>()) {
      if (sp.args.size() != 1 || sp.args[0].mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "unexpected lambda application shape in emission");
      Doc value = expr_at(sp.args[0].expr, kQuant + 1);
      std::string name = scope_.push(lam->binder);
      Doc body = expr_at(lam->body, kQuant);
      scope_.pop();
      return maybe_parens(
          prec > kQuant,
          Doc::group(txt("let " + name + " = ") + std::move(value) + Doc::line() +
                     txt("in ") + std::move(body)));
    }
    if (sp.head.get_if<IrExpr::Var>() && !sp.args.empty())
      return var_app(sp, prec);
    if (auto* b = sp.head.builtin_value()) return builtin_app(*b, sp, prec);
    throw Error(ErrorCode::TranslationError, "unsupported application head in emission");
  }

  Doc var_app(const core::Spine<DecidabilityBuiltin>& sp, int prec) {
    auto* v = sp.head.get_if<IrExpr::Var>();
    std::optional<std::size_t> decl_index;
    Doc head = txt(scope_.var(v->index, &decl_index));
    std::vector<Doc> args;
    for (const auto& a : explicit_args(sp)) args.push_back(expr_at(a.expr, kAtom));
    if (args.empty()) return head;
    return maybe_parens(prec > kApp, app_doc(std::move(head), std::move(args)));
  }

  Doc infix_chain(const core::Spine<DecidabilityBuiltin>& sp, const std::string& op,
                  int level, bool right_assoc, int prec) {
    auto args = explicit_args(sp);
    if (args.size() != 2)
      throw Error(ErrorCode::TranslationError,
                  "partially applied primitive in emission");
    int lp = right_assoc ? level + 1 : level;
    int rp = right_assoc ? level : level + 1;
    return maybe_parens(prec > level, binop(expr_at(args[0].expr, lp), op,
                                            expr_at(args[1].expr, rp)));
  }

  Doc prefix_fn(const core::Spine<DecidabilityBuiltin>& sp, const std::string& name,
                int prec) {
    std::vector<Doc> args;
    for (const auto& a : explicit_args(sp)) args.push_back(expr_at(a.expr, kAtom));
    if (args.empty()) return txt(name);
    return maybe_parens(prec > kApp, app_doc(txt(name), std::move(args)));
  }

  bool scalar_op(const core::Spine<DecidabilityBuiltin>& sp, const std::string& what) {
    return implicit_dims(spec_, sp, 0, scope_.depth(), what).empty();
  }

  Doc builtin_app(const DecidabilityBuiltin& b, const core::Spine<DecidabilityBuiltin>& sp,
                  int prec) {
    if (auto* th = b.type_head()) return type_head_app(*th, sp, prec);
    auto* s = b.standard();
    if (!s)
      throw Error(ErrorCode::TranslationError,
                  "class operation survived monomorphisation into emission");
    if (auto* n = s->nat_lit()) return txt(std::to_string(n->value));
    if (auto* bl = s->bool_lit()) return txt(bl->value ? "true" : "false");
    if (auto* tl = s->tensor_lit()) {
      if (tl->shape.empty()) return lit(tl->elems[0], prec);
      std::vector<Doc> elems;
      for (const auto& r : tl->elems) elems.push_back(lit(r, kAtom));
      return maybe_parens(prec > kApp,
                          app_doc(txt("tensorFromVec"),
                                  {txt(shape_list(tl->shape)),
                                   parens(join(std::move(elems), " ∷ ") +
                                          txt(" ∷ []"))}));
    }
    if (auto* st = s->stack_op()) {
      auto args = explicit_args(sp);
      if (args.size() != st->arity)
        throw Error(ErrorCode::TranslationError,
                    "partially applied stack in emission");
      std::vector<Doc> elems;
      for (const auto& a : args) elems.push_back(expr_at(a.expr, kAtom));
      Doc list = elems.empty() ? txt("[]")
                               : parens(join(std::move(elems), " ∷ ") +
                                        txt(" ∷ []"));
      return maybe_parens(prec > kApp, app_doc(txt("stack"), {std::move(list)}));
    }
    auto* h = std::get_if<core::StdHead>(&s->v);
    if (!h)
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    switch (*h) {
      case core::StdHead::Bool: return txt("Bool");
      case core::StdHead::Real: return txt("ℝ");
      case core::StdHead::Nat: return txt("ℕ");
      case core::StdHead::Index: return prefix_fn(sp, "Index", prec);
      case core::StdHead::Tensor: {
        auto dims = tensor_dims(spec_, core::rebuild_spine(sp), scope_.depth());
        if (!dims)
          throw Error(ErrorCode::TranslationError,
                      "tensor type without a concrete shape in emission");
        if (dims->empty()) return txt("ℝ");
        return maybe_parens(prec > kApp, txt("Tensor ℝ " + shape_list(*dims)));
      }
      case core::StdHead::List:
      case core::StdHead::Nil:
      case core::StdHead::Cons:
        throw Error(ErrorCode::TranslationError,
                    "shape expression appeared in term position during emission");
      case core::StdHead::If: {
        auto args = explicit_args(sp);
        if (args.size() != 3)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return maybe_parens(
            prec > kQuant,
            Doc::group(txt("if ") + expr_at(args[0].expr, kQuant + 1) +
                       Doc::nest(2, Doc::line() + txt("then ") +
                                        expr_at(args[1].expr, kQuant + 1)) +
                       Doc::nest(2, Doc::line() + txt("else ") +
                                        expr_at(args[2].expr, kQuant + 1))));
      }
      case core::StdHead::Forall: {
        auto args = explicit_args(sp);
        if (args.size() != 1)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        auto* lam = args[0].expr.get_if<IrExpr::Lam>();
        if (!lam)
          throw Error(ErrorCode::TranslationError,
                      "quantifier body is not a lambda in emission");
        std::string name = scope_.push(lam->binder);
        Doc body = expr_at(lam->body, kQuant);
        scope_.pop();
        return maybe_parens(prec > kQuant,
                            Doc::group(txt("∀ " + name + " →") +
                                       Doc::nest(2, Doc::line() + std::move(body))));
      }
      case core::StdHead::Lookup: {
        auto args = explicit_args(sp);
        if (args.size() != 2)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return maybe_parens(prec > kLookup,
                            binop(expr_at(args[0].expr, kLookup), "!",
                                  expr_at(args[1].expr, kLookup + 1)));
      }
      case core::StdHead::Not: return prefix_fn(sp, "not", prec);
      case core::StdHead::And: return infix_chain(sp, "∧", kAnd, true, prec);
      case core::StdHead::Or: return infix_chain(sp, "∨", kOr, true, prec);
      case core::StdHead::Implies:
        return infix_chain(sp, "⇒", kArrow, true, prec);
      case core::StdHead::Leq:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≤ᵇ", kCmp, false, prec)
                   : prefix_fn(sp, "tleqᵇ", prec);
      case core::StdHead::Lt:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "<ᵇ", kCmp, false, prec)
                   : prefix_fn(sp, "tltᵇ", prec);
      case core::StdHead::Eq:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≡ᵇ", kCmp, false, prec)
                   : prefix_fn(sp, "teqᵇ", prec);
      case core::StdHead::Neq:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≢ᵇ", kCmp, false, prec)
                   : prefix_fn(sp, "tneqᵇ", prec);
      case core::StdHead::Add:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "+", kAdd, false, prec)
                                           : prefix_fn(sp, "tadd", prec);
      case core::StdHead::Sub:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "-", kAdd, false, prec)
                                           : prefix_fn(sp, "tsub", prec);
      case core::StdHead::Mul:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "*", kMul, false, prec)
                                           : prefix_fn(sp, "tmul", prec);
      case core::StdHead::Div:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "/", kMul, false, prec)
                                           : prefix_fn(sp, "tdiv", prec);
      case core::StdHead::Neg: {
        if (!scalar_op(sp, "arithmetic")) return prefix_fn(sp, "tneg", prec);
        auto args = explicit_args(sp);
        if (args.size() != 1)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return maybe_parens(prec > kNegate,
                            txt("- ") + expr_at(args[0].expr, kAtom));
      }
    }
    throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
  }

  Doc type_head_app(TypeHead th, const core::Spine<DecidabilityBuiltin>& sp, int prec) {
    switch (th) {
      case TypeHead::TrueType: return txt("⊤");
      case TypeHead::FalseType: return txt("⊥");
      case TypeHead::NotType: return prefix_fn(sp, "¬", prec);
      case TypeHead::AndType: return infix_chain(sp, "×", kAnd, true, prec);
      case TypeHead::OrType: return infix_chain(sp, "⊎", kOr, true, prec);
      case TypeHead::ImpliesType:
        return infix_chain(sp, "→", kArrow, true, prec);
      case TypeHead::LeqType:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≤", kCmp, false, prec)
                   : prefix_fn(sp, "tleqᵖ", prec);
      case TypeHead::LtType:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "<", kCmp, false, prec)
                   : prefix_fn(sp, "tltᵖ", prec);
      case TypeHead::EqType:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≡", kCmp, false, prec)
                   : prefix_fn(sp, "teqᵖ", prec);
      case TypeHead::NeqType:
        return scalar_op(sp, "comparison")
                   ? infix_chain(sp, "≢", kCmp, false, prec)
                   : prefix_fn(sp, "tneqᵖ", prec);
    }
    throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
  }

  const IrSpec& spec_;
  const EmitInfo& info_;
  const std::optional<AgdaCacheRef>& cache_;
  NameScope scope_;
};

}  // namespace

std::string emit_agda(const itp_ir::IrSpec& spec, const EmitInfo& info,
                      const std::optional<AgdaCacheRef>& cache) {
  return AgdaEmitter(spec, info, cache).run();
}

}  // namespace vspec::backends
