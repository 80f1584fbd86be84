#include <cctype>
#include <map>

#include "emit_util.hpp"
#include "vspec/backends/emit.hpp"

// Imandra backend. Declarations are renamed to snake case; a rename that
// collides with another declaration or a reserved word is an error rather
// than silently shadowing. Networks and abstract parameters become opaque
// bindings, properties become axioms with their outermost quantifiers
// peeled into axiom parameters, and both elaboration fragments print as
// ordinary executable booleans.

namespace vspec::backends {

namespace {

using namespace detail;

constexpr int kTop = 0;
constexpr int kIf = 5;
constexpr int kImplies = 10;
constexpr int kOr = 25;
constexpr int kAnd = 30;
constexpr int kCmp = 40;
constexpr int kAdd = 50;
constexpr int kMul = 60;
constexpr int kNeg = 70;
constexpr int kApp = 90;
constexpr int kAtom = 100;

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{
      "let",    "in",        "if",     "then",        "else",   "fun",
      "axiom",  "theorem",   "lemma",  "type",        "of",     "match",
      "with",   "and",       "rec",    "true",        "false",  "not",
      "int",    "real",      "bool",   "list",        "tensor", "dims",
      "vec",    "tensor_from_vec",     "tensor_get",  "tensor_slice",
      "tensor_stack",         "tensor_add",  "tensor_sub", "tensor_mul",
      "tensor_div",           "tensor_neg",  "tensor_le",  "tensor_lt",
      "tensor_eq",            "tensor_neq",  "begin",      "end"};
  return kw;
}

std::string snake(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != '_') out += '_';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<std::string> snake_decl_names(const IrSpec& spec) {
  std::vector<std::string> out;
  std::map<std::string, std::string> seen;
  for (const auto& d : spec.decls) {
    std::string n = snake(d.name);
    if (keywords().count(n))
      throw Error(ErrorCode::TranslationError,
                  "declaration name '" + d.name + "' is reserved in Imandra");
    auto [it, fresh] = seen.emplace(n, d.name);
    if (!fresh)
      throw Error(ErrorCode::TranslationError,
                  "declaration names '" + it->second + "' and '" + d.name +
                      "' collide after renaming to snake case");
    out.push_back(n);
  }
  return out;
}

class ImandraEmitter {
 public:
  ImandraEmitter(const IrSpec& spec, const EmitInfo& info)
      : spec_(spec), info_(info), scope_(snake_decl_names(spec), keywords()) {}

  std::string run() {
    for (std::size_t i = 0; i < spec_.decls.size(); ++i)
      for (std::size_t r : decl_refs(spec_, i))
        if (spec_.decls[r].kind == core::DeclKind::Property)
          throw Error(ErrorCode::TranslationError,
                      "property '" + spec_.decls[r].name + "' is referenced by '" +
                          spec_.decls[i].name + "'; properties only exist as axioms");

    Doc out =
        txt("(* Generated by vspec. *)") + Doc::hard_line() +
        txt("(* Spec source sha256: " + info_.spec_hash + " *)") + blank() +
        txt("(* Tensor primitives beyond tensor_from_vec are defined in "
            "vehicle_tensor.iml. *)") +
        blank() + txt("type 'a tensor = { dims : int list; vec : 'a list }") +
        blank() +
        txt("let tensor_from_vec (d : int list) (v : 'a list) : 'a tensor = "
            "{ dims = d; vec = v }");
    for (std::size_t i = 0; i < spec_.decls.size(); ++i) {
      scope_.set_decl(i);
      out = std::move(out) + blank() + decl(i);
    }
    return render(std::move(out) + Doc::hard_line(), 100);
  }

 private:
  static Doc blank() { return Doc::hard_line() + Doc::hard_line(); }

  std::string name_of(std::size_t i) { return snake(spec_.decls[i].name); }

  Doc decl(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    switch (d.kind) {
      case core::DeclKind::Network:
        return opaque(i);
      case core::DeclKind::Property:
        return axiom(i);
      case core::DeclKind::Parameter:
        if (!d.body) return opaque(i);
        [[fallthrough]];
      case core::DeclKind::Function: {
        if (!d.body)
          throw Error(ErrorCode::TranslationError,
                      "definition '" + d.name + "' has no body to emit");
        PeeledLams peeled = peel_lams(*d.body, d.name);
        PiChain chain = flatten_pi(spec_, *d.type, d.name);
        if (peeled.binders.size() > chain.params.size())
          throw Error(ErrorCode::TranslationError,
                      "definition '" + d.name + "' binds more parameters than its type");
        Doc head = txt("let " + name_of(i));
        for (std::size_t k = 0; k < peeled.binders.size(); ++k) {
          Doc domain = type_at(chain.params[k].domain, kTop);
          std::string name = scope_.push(snake(peeled.binders[k]));
          head = std::move(head) + txt(" (" + name + " : ") + std::move(domain) +
                 txt(")");
        }
        IrExpr result = result_type(*d.type, peeled.binders.size(), d.name);
        Doc out = Doc::group(std::move(head) + txt(" : ") + type_at(result, kTop) +
                             txt(" =") +
                             Doc::nest(2, Doc::line() + expr_at(peeled.body, kTop)));
        for (std::size_t k = 0; k < peeled.binders.size(); ++k) scope_.pop();
        return out;
      }
    }
    throw Error(ErrorCode::TranslationError, "unknown declaration kind");
  }

  Doc opaque(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    return Doc::group(txt("let " + name_of(i) + " :") +
                      Doc::nest(2, Doc::line() + type_at(*d.type, kTop) +
                                       txt(" = () [@@opaque]")));
  }

  Doc axiom(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    if (!d.body)
      throw Error(ErrorCode::TranslationError,
                  "property '" + d.name + "' has no body to emit");
    std::vector<std::string> params;
    IrExpr cur = *d.body;
    for (;;) {
      auto sp = core::spine_view(cur);
      if (!is_head(sp.head, core::StdHead::Forall)) break;
      auto args = explicit_args(sp);
      if (args.size() != 1)
        throw Error(ErrorCode::TranslationError,
                    "partially applied primitive in emission");
      auto* lam = args[0].expr.get_if<IrExpr::Lam>();
      if (!lam)
        throw Error(ErrorCode::TranslationError,
                    "quantifier body is not a lambda in emission");
      params.push_back(scope_.push(snake(lam->binder)));
      cur = lam->body;
    }
    std::string lhs = "axiom " + name_of(i);
    if (params.empty()) lhs += " ()";
    for (const auto& p : params) lhs += " " + p;
    Doc out = Doc::group(txt(lhs + " =") +
                         Doc::nest(2, Doc::line() + expr_at(cur, kTop)));
    for (std::size_t k = 0; k < params.size(); ++k) scope_.pop();
    return out;
  }

  IrExpr result_type(const IrExpr& ty, std::size_t binders, const std::string& name) {
    IrExpr cur = norm(spec_, ty, 0);
    for (std::size_t k = 0; k < binders; ++k) {
      auto* pi = cur.get_if<IrExpr::Pi>();
      if (!pi)
        throw Error(ErrorCode::TranslationError,
                    "definition '" + name + "' binds more parameters than its type");
      cur = norm(spec_, pi->codomain, static_cast<std::uint32_t>(k + 1));
    }
    return cur;
  }

  Doc type_at(const IrExpr& t, int prec) {
    IrExpr nf = norm(spec_, t, scope_.depth());
    if (nf.is_universe()) return txt("bool");
    if (auto* pi = nf.get_if<IrExpr::Pi>()) {
      if (pi->mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "non-explicit binder survived monomorphisation");
      Doc lhs = type_at(pi->domain, kImplies + 1);
      scope_.push(pi->binder);
      Doc rhs = type_at(pi->codomain, kImplies);
      scope_.pop();
      return maybe_parens(prec > kImplies,
                          binop(std::move(lhs), "->", std::move(rhs)));
    }
    if (auto dims = tensor_dims(spec_, nf, scope_.depth()))
      return txt(dims->empty() ? "real" : "real tensor");
    if (is_head(nf, core::StdHead::Bool)) return txt("bool");
    if (is_head(nf, core::StdHead::Nat)) return txt("int");
    auto sp = core::spine_view(nf);
    if (is_head(sp.head, core::StdHead::Index)) return txt("int");
    return expr_at(nf, prec);
  }

  Doc app(Doc head, std::vector<Doc> args, int prec) {
    if (args.empty()) return head;
    return maybe_parens(prec > kApp, app_doc(std::move(head), std::move(args)));
  }

  Doc lit(const Rational& r, int prec) {
    LitParts p = lit_parts(r);
    Doc mag;
    if (p.integral)
      mag = txt(p.num + ".0");
    else if (p.decimal)
      mag = txt(*p.decimal);
    else
      mag = parens(txt(p.num + ".0 /. " + p.den + ".0"));
    if (!p.negative) return mag;
    return maybe_parens(prec > kNeg, txt("-. ") + std::move(mag));
  }

  Doc expr_at(const IrExpr& e, int prec) {
    if (auto* v = e.get_if<IrExpr::Var>()) {
      std::optional<std::size_t> di;
      return txt(scope_.var(v->index, &di));
    }
    if (e.is_universe()) return txt("bool");
    if (e.get_if<IrExpr::Pi>()) return type_at(e, prec);
    if (auto* lam = e.get_if<IrExpr::Lam>()) {
      std::string name = scope_.push(snake(lam->binder));
      Doc body = expr_at(lam->body, kIf);
      scope_.pop();
      return maybe_parens(prec > kIf,
                          Doc::group(txt("fun " + name + " ->") +
                                     Doc::nest(2, Doc::line() + std::move(body))));
    }
    auto sp = core::spine_view(e);
    if (auto* lam = sp.head.get_if<IrExpr::Lam>()) {
      if (sp.args.size() != 1 || sp.args[0].mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "unexpected lambda application shape in emission");
      Doc value = expr_at(sp.args[0].expr, kIf + 1);
      std::string name = scope_.push(snake(lam->binder));
      Doc body = expr_at(lam->body, kTop);
      scope_.pop();
      return maybe_parens(prec > kIf,
                          Doc::group(txt("let " + name + " = ") + std::move(value) +
                                     txt(" in") + Doc::line() + std::move(body)));
    }
    if (auto* v = sp.head.get_if<IrExpr::Var>()) {
      std::optional<std::size_t> di;
      Doc head = txt(scope_.var(v->index, &di));
      std::vector<Doc> args;
      for (const auto& a : explicit_args(sp))
        args.push_back(expr_at(a.expr, kApp + 1));
      return app(std::move(head), std::move(args), prec);
    }
    if (auto* b = sp.head.builtin_value()) return builtin_app(*b, sp, prec);
    throw Error(ErrorCode::TranslationError, "unsupported application head in emission");
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

  Doc named_fn(const core::Spine<DecidabilityBuiltin>& sp, const std::string& name,
               int prec) {
    std::vector<Doc> args;
    for (const auto& a : explicit_args(sp)) args.push_back(expr_at(a.expr, kApp + 1));
    return app(txt(name), std::move(args), prec);
  }

  bool scalar_op(const core::Spine<DecidabilityBuiltin>& sp, const std::string& what) {
    return implicit_dims(spec_, sp, 0, scope_.depth(), what).empty();
  }

  Doc cmp(const core::Spine<DecidabilityBuiltin>& sp, const std::string& scalar,
          const std::string& tensor, int prec) {
    if (scalar_op(sp, "comparison"))
      return infix_chain(sp, scalar, kCmp, false, prec);
    return named_fn(sp, tensor, prec);
  }

  Doc lookup_app(const core::Spine<DecidabilityBuiltin>& sp, int prec) {
    auto result_dims = implicit_dims(spec_, sp, 1, scope_.depth(), "lookup");
    auto args = explicit_args(sp);
    if (args.size() != 2)
      throw Error(ErrorCode::TranslationError,
                  "partially applied primitive in emission");
    if (!result_dims.empty())
      return app(txt("tensor_slice"),
                 {expr_at(args[0].expr, kApp + 1), expr_at(args[1].expr, kApp + 1)},
                 prec);
    std::vector<Doc> indices;
    std::optional<IrExpr> base;
    auto cur = sp;
    for (;;) {
      auto a = explicit_args(cur);
      if (a.size() != 2)
        throw Error(ErrorCode::TranslationError,
                    "partially applied primitive in emission");
      indices.push_back(expr_at(a[1].expr, kTop));
      auto inner = core::spine_view(a[0].expr);
      if (is_head(inner.head, core::StdHead::Lookup)) {
        cur = inner;
        continue;
      }
      base = a[0].expr;
      break;
    }
    std::reverse(indices.begin(), indices.end());
    return app(txt("tensor_get"),
               {expr_at(*base, kApp + 1),
                txt("[") + join(std::move(indices), "; ") + txt("]")},
               prec);
  }

  Doc builtin_app(const DecidabilityBuiltin& b, const core::Spine<DecidabilityBuiltin>& sp,
                  int prec) {
    if (auto* th = b.type_head()) {
      switch (*th) {
        case TypeHead::TrueType: return txt("true");
        case TypeHead::FalseType: return txt("false");
        case TypeHead::NotType: return named_fn(sp, "not", prec);
        case TypeHead::AndType: return infix_chain(sp, "&&", kAnd, true, prec);
        case TypeHead::OrType: return infix_chain(sp, "||", kOr, true, prec);
        case TypeHead::ImpliesType:
          return infix_chain(sp, "==>", kImplies, true, prec);
        case TypeHead::LeqType: return cmp(sp, "<=", "tensor_le", prec);
        case TypeHead::LtType: return cmp(sp, "<", "tensor_lt", prec);
        case TypeHead::EqType: return cmp(sp, "=", "tensor_eq", prec);
        case TypeHead::NeqType: return cmp(sp, "<>", "tensor_neq", prec);
      }
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    }
    auto* s = b.standard();
    if (!s)
      throw Error(ErrorCode::TranslationError,
                  "class operation survived monomorphisation into emission");
    if (auto* n = s->nat_lit()) return txt(std::to_string(n->value));
    if (auto* bl = s->bool_lit()) return txt(bl->value ? "true" : "false");
    if (auto* tl = s->tensor_lit()) {
      if (tl->shape.empty()) return lit(tl->elems[0], prec);
      std::string shape = "[";
      for (std::size_t i = 0; i < tl->shape.size(); ++i)
        shape += (i ? "; " : "") + std::to_string(tl->shape[i]);
      shape += "]";
      std::vector<Doc> elems;
      for (const auto& r : tl->elems) elems.push_back(lit(r, kTop));
      return app(txt("tensor_from_vec"),
                 {txt(shape), txt("[") + join(std::move(elems), "; ") + txt("]")},
                 prec);
    }
    if (auto* st = s->stack_op()) {
      auto args = explicit_args(sp);
      if (args.size() != st->arity)
        throw Error(ErrorCode::TranslationError,
                    "partially applied stack in emission");
      std::vector<Doc> elems;
      for (const auto& a : args) elems.push_back(expr_at(a.expr, kTop));
      return app(txt("tensor_stack"),
                 {txt("[") + join(std::move(elems), "; ") + txt("]")}, prec);
    }
    auto* h = std::get_if<core::StdHead>(&s->v);
    if (!h)
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    switch (*h) {
      case core::StdHead::Bool: return txt("bool");
      case core::StdHead::Real: return txt("real");
      case core::StdHead::Nat:
      case core::StdHead::Index: return txt("int");
      case core::StdHead::Tensor: {
        auto dims = tensor_dims(spec_, core::rebuild_spine(sp), scope_.depth());
        if (!dims)
          throw Error(ErrorCode::TranslationError,
                      "tensor type without a concrete shape in emission");
        return txt(dims->empty() ? "real" : "real tensor");
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
            prec > kIf,
            Doc::group(txt("if ") + expr_at(args[0].expr, kIf + 1) +
                       Doc::nest(2, Doc::line() + txt("then ") +
                                        expr_at(args[1].expr, kIf + 1)) +
                       Doc::nest(2, Doc::line() + txt("else ") +
                                        expr_at(args[2].expr, kIf + 1))));
      }
      case core::StdHead::Forall:
        throw Error(ErrorCode::TranslationError,
                    "universal quantifier outside property top level");
      case core::StdHead::Lookup: return lookup_app(sp, prec);
      case core::StdHead::Not: return named_fn(sp, "not", prec);
      case core::StdHead::And: return infix_chain(sp, "&&", kAnd, true, prec);
      case core::StdHead::Or: return infix_chain(sp, "||", kOr, true, prec);
      case core::StdHead::Implies: return infix_chain(sp, "==>", kImplies, true, prec);
      case core::StdHead::Leq: return cmp(sp, "<=", "tensor_le", prec);
      case core::StdHead::Lt: return cmp(sp, "<", "tensor_lt", prec);
      case core::StdHead::Eq: return cmp(sp, "=", "tensor_eq", prec);
      case core::StdHead::Neq: return cmp(sp, "<>", "tensor_neq", prec);
      case core::StdHead::Add:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "+.", kAdd, false, prec)
                                           : named_fn(sp, "tensor_add", prec);
      case core::StdHead::Sub:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "-.", kAdd, false, prec)
                                           : named_fn(sp, "tensor_sub", prec);
      case core::StdHead::Mul:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "*.", kMul, false, prec)
                                           : named_fn(sp, "tensor_mul", prec);
      case core::StdHead::Div:
        return scalar_op(sp, "arithmetic") ? infix_chain(sp, "/.", kMul, false, prec)
                                           : named_fn(sp, "tensor_div", prec);
      case core::StdHead::Neg: {
        if (!scalar_op(sp, "arithmetic")) return named_fn(sp, "tensor_neg", prec);
        auto args = explicit_args(sp);
        if (args.size() != 1)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return maybe_parens(prec > kNeg,
                            txt("-. ") + expr_at(args[0].expr, kAtom));
      }
    }
    throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
  }

  const IrSpec& spec_;
  const EmitInfo& info_;
  NameScope scope_;
};

}  // namespace

std::string emit_imandra(const itp_ir::IrSpec& spec, const EmitInfo& info) {
  return ImandraEmitter(spec, info).run();
}

}  // namespace vspec::backends
