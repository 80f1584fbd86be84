#include <sstream>

#include "emit_util.hpp"
#include "vspec/backends/emit.hpp"

// Rocq backend over the MathComp-style companion tensor library. Networks
// become Parameters (opaque: a signature with no body), properties become
// Axioms, everything else ordinary Definitions. The constructive_reals
// flag swaps the real-number import and the literal encoding and nothing
// else, so the two modes stay diffable.

namespace vspec::backends {

namespace {

using namespace detail;

constexpr int kTop = 0;
constexpr int kQuant = 5;
constexpr int kArrow = 10;
constexpr int kOr = 25;
constexpr int kAnd = 30;
constexpr int kCmp = 40;
constexpr int kAdd = 50;
constexpr int kMul = 60;
constexpr int kNegate = 75;
constexpr int kApp = 90;
constexpr int kAtom = 100;

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{
      "Definition", "Parameter", "Axiom", "forall", "fun",   "let",  "in",
      "if",         "then",      "else",  "Prop",   "Set",   "Type", "bool",
      "true",       "false",     "nat",   "tensor", "R",     "idx",  "tlookup",
      "tslice",     "tstack",    "tensor_from_vec", "match", "end",  "fix",
      "Require",    "Import",    "From"};
  return kw;
}

class RocqEmitter {
 public:
  RocqEmitter(const IrSpec& spec, const EmitInfo& info, bool constructive)
      : spec_(spec), info_(info), constructive_(constructive),
        scope_(decl_names(spec), keywords()) {}

  std::string run() {
    for (const auto& d : spec_.decls)
      if (keywords().count(d.name))
        throw Error(ErrorCode::TranslationError,
                    "declaration name '" + d.name + "' is reserved in Rocq");
    Doc out = txt("(* Generated by vspec. *)") + Doc::hard_line() +
              txt("(* Spec source sha256: " + info_.spec_hash + " *)") +
              Doc::hard_line() + Doc::hard_line() +
              txt("Require Import VehicleTensor.") + Doc::hard_line() +
              txt(constructive_ ? "Require Import VehicleRealConstructive."
                                : "Require Import VehicleRealInterface.") +
              Doc::hard_line();
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
      case core::DeclKind::Network:
        return Doc::group(txt("Parameter " + d.name + " :") +
                          Doc::nest(2, Doc::line() + type(*d.type) + txt(".")));
      case core::DeclKind::Property:
        return Doc::group(txt("Axiom " + d.name + " :") +
                          Doc::nest(2, Doc::line() + expr(*d.body, kTop) + txt(".")));
      case core::DeclKind::Parameter:
        if (!d.body)
          return Doc::group(txt("Parameter " + d.name + " :") +
                            Doc::nest(2, Doc::line() + type(*d.type) + txt(".")));
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
        Doc head = txt("Definition " + d.name);
        for (std::size_t k = 0; k < peeled.binders.size(); ++k) {
          Doc domain = type_shallow(chain.params[k].domain);
          std::string name = scope_.push(peeled.binders[k]);
          head = std::move(head) + txt(" (" + name + " : ") + std::move(domain) +
                 txt(")");
        }
        IrExpr result = *d.type;
        {
          // Result type after the bound parameters.
          IrExpr cur = norm(spec_, result, 0);
          for (std::size_t k = 0; k < peeled.binders.size(); ++k) {
            auto* pi = cur.get_if<IrExpr::Pi>();
            if (!pi)
              throw Error(ErrorCode::TranslationError,
                          "definition '" + d.name + "' binds more parameters than its type");
            cur = norm(spec_, pi->codomain, static_cast<std::uint32_t>(k + 1));
          }
          result = cur;
        }
        Doc body;
        auto* nl = std_builtin(peeled.body) ? std_builtin(peeled.body)->nat_lit()
                                            : nullptr;
        if (nl && index_bound(result))
          body = parens(txt("idx " + std::to_string(nl->value)));
        else
          body = expr(peeled.body, kTop);
        Doc out = Doc::group(std::move(head) + txt(" : ") + type(result) +
                             txt(" :=") +
                             Doc::nest(2, Doc::line() + std::move(body) + txt(".")));
        for (std::size_t k = 0; k < peeled.binders.size(); ++k) scope_.pop();
        return out;
      }
    }
    throw Error(ErrorCode::TranslationError, "unknown declaration kind");
  }

  // Types rendered inside an already-delimited annotation position.
  Doc type_shallow(const IrExpr& t) { return type_at(t, kTop); }

  // An Index-typed literal needs the companion's ordinal injection.
  std::optional<std::uint64_t> index_bound(const IrExpr& ty) {
    IrExpr nf = norm(spec_, ty, scope_.depth());
    auto sp = core::spine_view(nf);
    if (!is_head(sp.head, core::StdHead::Index) || sp.args.size() != 1)
      return std::nullopt;
    return nat_of(spec_, sp.args[0].expr, scope_.depth());
  }

  Doc type(const IrExpr& t) { return type_at(t, kTop); }

  Doc type_at(const IrExpr& t, int prec) {
    IrExpr nf = norm(spec_, t, scope_.depth());
    if (nf.is_universe()) return txt("Prop");
    if (auto* pi = nf.get_if<IrExpr::Pi>()) {
      if (pi->mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "non-explicit binder survived monomorphisation");
      Doc lhs = type_at(pi->domain, kArrow + 1);
      scope_.push(pi->binder);
      Doc rhs = type_at(pi->codomain, kArrow);
      scope_.pop();
      return maybe_parens(prec > kArrow,
                          binop(std::move(lhs), "->", std::move(rhs)));
    }
    if (auto dims = tensor_dims(spec_, nf, scope_.depth()))
      return render_tensor_type(*dims, prec);
    if (is_head(nf, core::StdHead::Bool)) return txt("bool");
    if (is_head(nf, core::StdHead::Nat)) return txt("nat");
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(nf);
    if (is_head(sp.head, core::StdHead::Index) && sp.args.size() == 1) {
      auto n = nat_of(spec_, sp.args[0].expr, scope_.depth());
      if (n) return txt("'I_" + std::to_string(*n));
    }
    return expr_at(nf, prec);
  }

  Doc render_tensor_type(const std::vector<std::uint64_t>& dims, int prec) {
    if (dims.empty()) return txt("R");
    return maybe_parens(prec > kApp, txt("tensor R " + shape_list(dims)));
  }

  static std::string shape_list(const std::vector<std::uint64_t>& dims) {
    std::string out = "(";
    for (auto d : dims) out += std::to_string(d) + " :: ";
    out += "nil)";
    return out;
  }

  Doc expr(const IrExpr& e, int prec) { return expr_at(e, prec); }

  Doc lit(const Rational& r, int prec) {
    LitParts p = lit_parts(r);
    if (constructive_) {
      std::string num = (p.negative ? "(-" + p.num + ")" : p.num);
      return parens(txt("injQ (" + num + " # " + p.den + ")"));
    }
    Doc mag = p.integral ? txt(p.num + "%:R")
                         : parens(txt(p.num + "%:R / " + p.den + "%:R"));
    if (!p.negative) return mag;
    return maybe_parens(prec > kNegate, txt("- ") + std::move(mag));
  }

  Doc expr_at(const IrExpr& e, int prec) {
    if (auto* v = e.get_if<IrExpr::Var>()) {
      std::optional<std::size_t> decl_index;
      return txt(scope_.var(v->index, &decl_index));
    }
    if (e.is_universe()) return txt("Prop");
    if (e.get_if<IrExpr::Pi>()) return type_at(e, prec);
    if (auto* lam = e.get_if<IrExpr::Lam>()) {
      std::string name = scope_.push(lam->binder);
      Doc body = expr_at(lam->body, kQuant);
      scope_.pop();
      return maybe_parens(prec > kQuant,
                          Doc::group(txt("fun " + name + " =>") +
                                     Doc::nest(2, Doc::line() + std::move(body))));
    }
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(e);
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
          Doc::group(txt("let " + name + " := ") + std::move(value) + Doc::line() +
                     txt("in ") + std::move(body)));
    }
    if (sp.head.get_if<IrExpr::Var>() && !sp.args.empty()) {
      auto* v = sp.head.get_if<IrExpr::Var>();
      std::optional<std::size_t> decl_index;
      Doc head = txt(scope_.var(v->index, &decl_index));
      std::vector<Doc> args;
      for (const auto& a : explicit_args(sp)) args.push_back(arg_at(a.expr));
      if (args.empty()) return head;
      return maybe_parens(prec > kApp, app_doc(std::move(head), std::move(args)));
    }
    if (auto* b = sp.head.builtin_value()) return builtin_app(*b, sp, prec);
    throw Error(ErrorCode::TranslationError, "unsupported application head in emission");
  }

  // Index literals only materialise where an Index is demanded; in Rocq
  // that needs the companion's ordinal injection.
  Doc arg_at(const IrExpr& e) { return expr_at(e, kAtom); }

  Doc index_arg(const IrExpr& e) {
    if (auto* s = std_builtin(e))
      if (auto* n = s->nat_lit()) return parens(txt("idx " + std::to_string(n->value)));
    return expr_at(e, kAtom);
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
    for (const auto& a : explicit_args(sp)) args.push_back(arg_at(a.expr));
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
                          app_doc(txt("tensor_from_vec"),
                                  {txt(shape_list(tl->shape)),
                                   parens(join(std::move(elems), " :: ") +
                                          txt(" :: nil"))}));
    }
    if (auto* st = s->stack_op()) {
      auto args = explicit_args(sp);
      if (args.size() != st->arity)
        throw Error(ErrorCode::TranslationError,
                    "partially applied stack in emission");
      std::vector<Doc> elems;
      for (const auto& a : args) elems.push_back(arg_at(a.expr));
      Doc list = elems.empty()
                     ? txt("nil")
                     : parens(join(std::move(elems), " :: ") + txt(" :: nil"));
      return maybe_parens(prec > kApp, app_doc(txt("tstack"), {std::move(list)}));
    }
    auto* h = std::get_if<core::StdHead>(&s->v);
    if (!h)
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    switch (*h) {
      case core::StdHead::Bool: return txt("bool");
      case core::StdHead::Real: return txt("R");
      case core::StdHead::Nat: return txt("nat");
      case core::StdHead::Index: {
        auto args = explicit_args(sp);
        std::optional<std::uint64_t> n;
        if (args.size() == 1) n = nat_of(spec_, args[0].expr, scope_.depth());
        if (!n)
          throw Error(ErrorCode::TranslationError,
                      "index type without a concrete bound in emission");
        return txt("'I_" + std::to_string(*n));
      }
      case core::StdHead::Tensor: {
        auto dims = tensor_dims(spec_, core::rebuild_spine(sp), scope_.depth());
        if (!dims)
          throw Error(ErrorCode::TranslationError,
                      "tensor type without a concrete shape in emission");
        return render_tensor_type(*dims, prec);
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
        auto dims = implicit_dims(spec_, sp, 0, scope_.depth(), "quantifier");
        Doc domain = render_tensor_type(dims, kTop);
        std::string name = scope_.push(lam->binder);
        Doc body = expr_at(lam->body, kQuant);
        scope_.pop();
        return maybe_parens(
            prec > kQuant,
            Doc::group(txt("forall " + name + " : ") + std::move(domain) + txt(",") +
                       Doc::nest(2, Doc::line() + std::move(body))));
      }
      case core::StdHead::Lookup: {
        auto args = explicit_args(sp);
        if (args.size() != 2)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return maybe_parens(prec > kApp,
                            app_doc(txt("tlookup"),
                                    {arg_at(args[0].expr), index_arg(args[1].expr)}));
      }
      case core::StdHead::Not: return prefix_fn(sp, "negb", prec);
      case core::StdHead::And: return prefix_fn(sp, "andb", prec);
      case core::StdHead::Or: return prefix_fn(sp, "orb", prec);
      case core::StdHead::Implies: return prefix_fn(sp, "impliesb", prec);
      case core::StdHead::Leq:
        return scalar_op(sp, "comparison") ? prefix_fn(sp, "leqb", prec)
                                           : prefix_fn(sp, "tleqb", prec);
      case core::StdHead::Lt:
        return scalar_op(sp, "comparison") ? prefix_fn(sp, "ltb", prec)
                                           : prefix_fn(sp, "tltb", prec);
      case core::StdHead::Eq:
        return scalar_op(sp, "comparison") ? prefix_fn(sp, "eqb", prec)
                                           : prefix_fn(sp, "teqb", prec);
      case core::StdHead::Neq:
        return scalar_op(sp, "comparison") ? prefix_fn(sp, "neqb", prec)
                                           : prefix_fn(sp, "tneqb", prec);
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
        if (!scalar_op(sp, "arithmetic")) return prefix_fn(sp, "topp", prec);
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
      case TypeHead::TrueType: return txt("True");
      case TypeHead::FalseType: return txt("False");
      case TypeHead::NotType: return prefix_fn(sp, "~", prec);
      case TypeHead::AndType: return infix_chain(sp, "/\\", kAnd, true, prec);
      case TypeHead::OrType: return infix_chain(sp, "\\/", kOr, true, prec);
      case TypeHead::ImpliesType: return infix_chain(sp, "->", kArrow, true, prec);
      case TypeHead::LeqType:
        return scalar_op(sp, "comparison") ? infix_chain(sp, "<=", kCmp, false, prec)
                                           : prefix_fn(sp, "tle", prec);
      case TypeHead::LtType:
        return scalar_op(sp, "comparison") ? infix_chain(sp, "<", kCmp, false, prec)
                                           : prefix_fn(sp, "tlt", prec);
      case TypeHead::EqType:
        return scalar_op(sp, "comparison") ? infix_chain(sp, "=", kCmp, false, prec)
                                           : prefix_fn(sp, "teq", prec);
      case TypeHead::NeqType:
        return scalar_op(sp, "comparison") ? infix_chain(sp, "<>", kCmp, false, prec)
                                           : prefix_fn(sp, "tneq", prec);
    }
    throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
  }

  const IrSpec& spec_;
  const EmitInfo& info_;
  bool constructive_;
  NameScope scope_;
};

}  // namespace

std::string emit_rocq(const itp_ir::IrSpec& spec, const EmitInfo& info,
                      bool constructive_reals) {
  return RocqEmitter(spec, info, constructive_reals).run();
}

}  // namespace vspec::backends
