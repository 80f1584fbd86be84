#include <optional>

#include "emit_util.hpp"
#include "vspec/backends/emit.hpp"

// Isabelle backend. Networks and properties live in a single locale (fixes
// and assumes respectively); every other declaration becomes an ordinary
// global definition, with networks threaded through as extra leading
// parameters wherever a definition is a function or transitively touches a
// network. Each distinct tensor shape appearing in a network signature gets
// a typedef plus coercions into and out of the companion tensor type, so the
// locale can fix networks at the precise shapes the source declared.

namespace vspec::backends {

namespace {

using namespace detail;

constexpr int kTop = 0;
constexpr int kArrow = 10;
constexpr int kOr = 25;
constexpr int kAnd = 30;
constexpr int kCmp = 40;
constexpr int kAdd = 50;
constexpr int kMul = 60;
constexpr int kApp = 90;
constexpr int kAtom = 100;

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw{
      "theory",     "imports",   "begin",      "end",      "locale",
      "fixes",      "assumes",   "shows",      "and",      "definition",
      "where",      "lemma",     "typedef",    "consts",   "declare",
      "using",      "by",        "if",         "then",     "else",
      "let",        "in",        "case",       "of",       "fun",
      "function",   "datatype",  "record",     "True",     "False",
      "dims",       "lookup",    "slice",      "tensor_stack",
      "tensor_from_vec",          "tensor",    "real",     "bool",
      "nat",        "R",         "FlexTensor", "flex_to_tensor",
      "prod_list",  "length",    "t",          "shape",    "elems"};
  return kw;
}

std::string bracket_dims(const std::vector<std::uint64_t>& dims) {
  std::string out = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(dims[i]);
  }
  return out + "]";
}

std::string cons_dims(const std::vector<std::uint64_t>& dims) {
  std::string out = "(" + std::to_string(dims[0]) + " :: nat) # ";
  for (std::size_t i = 1; i < dims.size(); ++i)
    out += std::to_string(dims[i]) + " # ";
  return out + "[]";
}

class IsabelleEmitter {
 public:
  IsabelleEmitter(const IrSpec& spec, const EmitInfo& info)
      : spec_(spec), info_(info), scope_(decl_names(spec), keywords()) {}

  std::string run() {
    classify();
    collect_typedefs();
    analyse_lifting();

    Doc out = txt("(* Generated by vspec. *)") + Doc::hard_line() +
              txt("(* Spec source sha256: " + info_.spec_hash + " *)") +
              Doc::hard_line() + Doc::hard_line() +
              txt("theory " + info_.module_name) + Doc::hard_line() +
              txt("  imports VehicleCompanion") + Doc::hard_line() + txt("begin");

    for (const auto& td : typedefs_)
      out = std::move(out) + blank() + typedef_block(td.first, td.second);
    for (const auto& td : typedefs_)
      out = std::move(out) + blank() + coercion_block(td.first);
    for (const auto& td : typedefs_)
      out = std::move(out) + blank() + rewrite_lemma(td.first, td.second);

    for (std::size_t i = 0; i < spec_.decls.size(); ++i) {
      const IrDecl& d = spec_.decls[i];
      if (d.kind == core::DeclKind::Network || d.kind == core::DeclKind::Property)
        continue;
      scope_.set_decl(i);
      out = std::move(out) + blank() + definition(i);
    }

    if (!networks_.empty() || !properties_.empty())
      out = std::move(out) + blank() + locale();

    out = std::move(out) + blank() + txt("end") + Doc::hard_line();
    return render(out, 100);
  }

 private:
  static Doc blank() { return Doc::hard_line() + Doc::hard_line(); }

  void classify() {
    for (std::size_t i = 0; i < spec_.decls.size(); ++i) {
      const IrDecl& d = spec_.decls[i];
      if (keywords().count(d.name))
        throw Error(ErrorCode::TranslationError,
                    "declaration name '" + d.name + "' is reserved in Isabelle");
      if (d.kind == core::DeclKind::Network) networks_.push_back(i);
      if (d.kind == core::DeclKind::Property) {
        if (!d.body)
          throw Error(ErrorCode::TranslationError,
                      "property '" + d.name + "' has no body to emit");
        properties_.push_back(i);
      }
      for (std::size_t r : decl_refs(spec_, i))
        if (spec_.decls[r].kind == core::DeclKind::Property)
          throw Error(ErrorCode::TranslationError,
                      "property '" + spec_.decls[r].name +
                          "' is referenced by '" + d.name +
                          "'; properties only exist as locale assumptions");
    }
  }

  // One typedef per distinct positive-rank shape in a network signature,
  // in declaration order, inputs before outputs. Named after the first
  // matching surface alias when one exists.
  void collect_typedefs() {
    auto record = [&](const std::vector<std::uint64_t>& dims) {
      if (dims.empty()) return;
      for (const auto& td : typedefs_)
        if (td.second == dims) return;
      std::string name;
      for (const auto& a : spec_.aliases)
        if (a.dims == dims) {
          name = a.name;
          break;
        }
      if (name.empty()) {
        name = "TensorS";
        for (auto d : dims) name += "_" + std::to_string(d);
      }
      std::set<std::string> taken(keywords());
      for (const auto& d : spec_.decls) taken.insert(d.name);
      for (const auto& td : typedefs_) taken.insert(td.first);
      std::string base = name;
      for (int k = 1; taken.count(name); ++k) name = base + std::to_string(k);
      typedefs_.emplace_back(name, dims);
    };
    for (std::size_t i : networks_)
      for (const auto& dims : network_shape(i)) record(dims);
  }

  // Flattened tensor shapes of a network type, parameters first.
  std::vector<std::vector<std::uint64_t>> network_shape(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    PiChain chain = flatten_pi(spec_, *d.type, d.name);
    std::vector<std::vector<std::uint64_t>> out;
    auto dims_of = [&](const IrExpr& ty, std::uint32_t depth) {
      auto dims = tensor_dims(spec_, ty, depth);
      if (!dims)
        throw Error(ErrorCode::TranslationError,
                    "network '" + d.name + "' does not have a concrete tensor signature");
      return *dims;
    };
    for (std::size_t k = 0; k < chain.params.size(); ++k)
      out.push_back(dims_of(chain.params[k].domain, static_cast<std::uint32_t>(k)));
    out.push_back(dims_of(chain.result, static_cast<std::uint32_t>(chain.params.size())));
    return out;
  }

  void analyse_lifting() {
    lifted_.assign(spec_.decls.size(), false);
    if (networks_.empty()) return;
    for (std::size_t i = 0; i < spec_.decls.size(); ++i) {
      const IrDecl& d = spec_.decls[i];
      if (d.kind == core::DeclKind::Network || d.kind == core::DeclKind::Property)
        continue;
      if (!d.body) continue;
      if (norm(spec_, *d.type, 0).get_if<IrExpr::Pi>()) {
        lifted_[i] = true;
        continue;
      }
      for (std::size_t r : decl_refs(spec_, i))
        if (spec_.decls[r].kind == core::DeclKind::Network || lifted_[r]) {
          lifted_[i] = true;
          break;
        }
    }
  }

  std::string shape_type_name(const std::vector<std::uint64_t>& dims) const {
    if (dims.empty()) return "real";
    for (const auto& td : typedefs_)
      if (td.second == dims) return td.first;
    return "R tensor";
  }

  std::string network_type_string(std::size_t i) {
    std::string out;
    for (const auto& dims : network_shape(i)) {
      if (!out.empty()) out += " => ";
      out += shape_type_name(dims);
    }
    return out;
  }

  Doc typedef_block(const std::string& name, const std::vector<std::uint64_t>& dims) {
    return txt("typedef " + name + " = \"{ a :: R tensor. (dims a) = " +
               bracket_dims(dims) + " }\"") +
           Doc::hard_line() + txt("  using dims_tensor_from_lookup by blast");
  }

  Doc coercion_block(const std::string& n) {
    return txt("definition " + n + "_to_tensor :: \"" + n + " => R tensor\"") +
           Doc::hard_line() +
           txt("  where \"" + n + "_to_tensor t = Rep_" + n + " t\"") + blank() +
           txt("definition FlexTensor_to_" + n + " :: \"R FlexTensor => " + n +
               "\"") +
           Doc::hard_line() +
           txt("  where \"FlexTensor_to_" + n + " t = Abs_" + n +
               " (flex_to_tensor t)\"") +
           blank() + txt("declare [[coercion " + n + "_to_tensor]]") +
           Doc::hard_line() + txt("declare [[coercion FlexTensor_to_" + n + "]]");
  }

  Doc rewrite_lemma(const std::string& n, const std::vector<std::uint64_t>& dims) {
    return txt("lemma " + n + "_tensor_rewrite0[simp]:") + Doc::hard_line() +
           txt("  assumes \"prod_list shape = length elems\"") + Doc::hard_line() +
           txt("      and \"shape = " + cons_dims(dims) + "\"") + Doc::hard_line() +
           txt("    shows \"(Rep_tensor (Rep_" + n) + Doc::hard_line() +
           txt("              (Abs_" + n +
               " (Abs_tensor (shape,elems))))) = (shape,elems)\"") +
           Doc::hard_line() +
           txt("  using assms by (auto simp: Abs_" + n + "_inverse)");
  }

  Doc definition(std::size_t i) {
    const IrDecl& d = spec_.decls[i];
    if (!d.body)
      return txt("consts " + d.name + " :: \"") + type_at(*d.type, kTop) + txt("\"");

    Doc sig;
    if (lifted_[i])
      for (std::size_t n : networks_)
        sig = std::move(sig) + txt("(" + network_type_string(n) + ") => ");
    sig = std::move(sig) + type_at(*d.type, kTop);

    PeeledLams peeled = peel_lams(*d.body, d.name);
    std::string lhs = d.name;
    if (lifted_[i])
      for (std::size_t n : networks_) lhs += " " + spec_.decls[n].name;
    for (const auto& b : peeled.binders) lhs += " " + scope_.push(b);
    Doc body = expr_at(peeled.body, kCmp + 1);
    for (std::size_t k = 0; k < peeled.binders.size(); ++k) scope_.pop();

    return Doc::group(txt("definition " + d.name + " :: \"") + std::move(sig) +
                      txt("\"")) +
           Doc::hard_line() +
           Doc::group(txt("  where \"" + lhs + " =") +
                      Doc::nest(4, Doc::line() + std::move(body) + txt("\"")));
  }

  Doc locale() {
    Doc out = txt("locale " + info_.module_name + " =");
    bool first = true;
    for (std::size_t n : networks_) {
      out = std::move(out) + Doc::hard_line() +
            txt((first ? "  fixes " : "    and ") + spec_.decls[n].name + " :: \"" +
                network_type_string(n) + "\"");
      first = false;
    }
    first = true;
    for (std::size_t p : properties_) {
      scope_.set_decl(p);
      out = std::move(out) + Doc::hard_line() +
            Doc::group(txt((first ? "  assumes " : "      and ") +
                           spec_.decls[p].name + ": \"") +
                       expr_at(*spec_.decls[p].body, kTop) + txt("\""));
      first = false;
    }
    return std::move(out) + Doc::hard_line() + txt("begin") + Doc::hard_line() +
           txt("end");
  }

  Doc type_at(const IrExpr& t, int prec) {
    IrExpr nf = norm(spec_, t, scope_.depth());
    if (nf.is_universe()) return txt("bool");
    if (auto* pi = nf.get_if<IrExpr::Pi>()) {
      if (pi->mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "non-explicit binder survived monomorphisation");
      Doc lhs = type_at(pi->domain, kArrow + 1);
      scope_.push(pi->binder);
      Doc rhs = type_at(pi->codomain, kArrow);
      scope_.pop();
      return maybe_parens(prec > kArrow,
                          Doc::group(std::move(lhs) + txt(" =>") +
                                     Doc::nest(2, Doc::line() + std::move(rhs))));
    }
    if (auto dims = tensor_dims(spec_, nf, scope_.depth())) {
      std::string name = shape_type_name(*dims);
      return maybe_parens(prec > kApp && name == "R tensor", txt(name));
    }
    if (is_head(nf, core::StdHead::Bool)) return txt("bool");
    if (is_head(nf, core::StdHead::Nat)) return txt("nat");
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(nf);
    if (is_head(sp.head, core::StdHead::Index)) return txt("nat");
    return expr_at(nf, prec);
  }

  // Application, always parenthesised.
  Doc iapp(Doc head, std::vector<Doc> args) {
    return parens(app_doc(std::move(head), std::move(args)));
  }

  Doc var_ref(std::uint32_t index, std::vector<Doc> extra_args) {
    std::optional<std::size_t> di;
    Doc head = txt(scope_.var(index, &di));
    std::vector<Doc> args;
    if (di && lifted_[*di])
      for (std::size_t n : networks_) args.push_back(txt(spec_.decls[n].name));
    for (auto& a : extra_args) args.push_back(std::move(a));
    if (args.empty()) return head;
    return iapp(std::move(head), std::move(args));
  }

  Doc lit(const Rational& r) {
    LitParts p = lit_parts(r);
    std::string mag = p.decimal ? *p.decimal : "";
    Doc body = p.decimal ? txt(mag) : parens(txt(p.num + " / " + p.den));
    if (!p.negative) return body;
    return parens(txt("- ") + std::move(body));
  }

  Doc expr_at(const IrExpr& e, int prec) {
    if (auto* v = e.get_if<IrExpr::Var>()) return var_ref(v->index, {});
    if (e.is_universe()) return txt("bool");
    if (e.get_if<IrExpr::Pi>()) return type_at(e, prec);
    if (auto* lam = e.get_if<IrExpr::Lam>()) {
      std::string name = scope_.push(lam->binder);
      Doc body = expr_at(lam->body, kTop);
      scope_.pop();
      return parens(Doc::group(txt("\\<lambda> " + name + ".") +
                               Doc::nest(2, Doc::line() + std::move(body))));
    }
    core::Spine<DecidabilityBuiltin> sp = core::spine_view(e);
    if (auto* lam = sp.head.get_if<IrExpr::Lam>()) {
      if (sp.args.size() != 1 || sp.args[0].mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::TranslationError,
                    "unexpected lambda application shape in emission");
      Doc value = expr_at(sp.args[0].expr, kTop);
      std::string name = scope_.push(lam->binder);
      Doc body = expr_at(lam->body, kTop);
      scope_.pop();
      return parens(Doc::group(txt("let " + name + " = ") + std::move(value) +
                               Doc::line() + txt("in ") + std::move(body)));
    }
    if (auto* v = sp.head.get_if<IrExpr::Var>()) {
      std::vector<Doc> args;
      for (const auto& a : explicit_args(sp)) args.push_back(expr_at(a.expr, kAtom));
      return var_ref(v->index, std::move(args));
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

  Doc cmp_chain(const core::Spine<DecidabilityBuiltin>& sp, const std::string& op,
                int prec) {
    auto args = explicit_args(sp);
    if (args.size() != 2)
      throw Error(ErrorCode::TranslationError,
                  "partially applied primitive in emission");
    return maybe_parens(prec > kCmp, binop(expr_at(args[0].expr, kCmp + 1), op,
                                           expr_at(args[1].expr, kCmp + 1)));
  }

  Doc not_unit(const core::Spine<DecidabilityBuiltin>& sp) {
    auto args = explicit_args(sp);
    if (args.size() != 1)
      throw Error(ErrorCode::TranslationError,
                  "partially applied primitive in emission");
    return parens(txt("~ ") + expr_at(args[0].expr, kTop));
  }

  Doc lookup_app(const core::Spine<DecidabilityBuiltin>& sp) {
    auto result_dims = implicit_dims(spec_, sp, 1, scope_.depth(), "lookup");
    auto args = explicit_args(sp);
    if (args.size() != 2)
      throw Error(ErrorCode::TranslationError,
                  "partially applied primitive in emission");
    if (!result_dims.empty())
      return iapp(txt("slice"),
                  {expr_at(args[0].expr, kAtom), expr_at(args[1].expr, kAtom)});
    std::vector<Doc> indices;
    std::optional<IrExpr> base;
    core::Spine<DecidabilityBuiltin> cur = sp;
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
    return parens(Doc::group(txt("lookup ") + expr_at(*base, kAtom) +
                             Doc::nest(2, Doc::line() + txt("[") +
                                              join(std::move(indices), ", ") +
                                              txt("]"))));
  }

  Doc builtin_app(const DecidabilityBuiltin& b, const core::Spine<DecidabilityBuiltin>& sp,
                  int prec) {
    if (auto* th = b.type_head()) {
      switch (*th) {
        case TypeHead::TrueType: return txt("True");
        case TypeHead::FalseType: return txt("False");
        case TypeHead::NotType: return not_unit(sp);
        case TypeHead::AndType: return infix_chain(sp, "&", kAnd, true, prec);
        case TypeHead::OrType: return infix_chain(sp, "|", kOr, true, prec);
        case TypeHead::ImpliesType: return infix_chain(sp, "-->", kArrow, true, prec);
        case TypeHead::LeqType: return cmp_chain(sp, "<=", prec);
        case TypeHead::LtType: return cmp_chain(sp, "<", prec);
        case TypeHead::EqType: return cmp_chain(sp, "=", prec);
        case TypeHead::NeqType: return cmp_chain(sp, "~=", prec);
      }
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    }
    auto* s = b.standard();
    if (!s)
      throw Error(ErrorCode::TranslationError,
                  "class operation survived monomorphisation into emission");
    if (auto* n = s->nat_lit()) return txt(std::to_string(n->value));
    if (auto* bl = s->bool_lit()) return txt(bl->value ? "True" : "False");
    if (auto* tl = s->tensor_lit()) {
      if (tl->shape.empty()) return lit(tl->elems[0]);
      std::vector<Doc> elems;
      for (const auto& r : tl->elems) elems.push_back(lit(r));
      return iapp(txt("tensor_from_vec"),
                  {txt(bracket_dims(tl->shape)),
                   txt("[") + join(std::move(elems), ", ") + txt("]")});
    }
    if (auto* st = s->stack_op()) {
      auto args = explicit_args(sp);
      if (args.size() != st->arity)
        throw Error(ErrorCode::TranslationError,
                    "partially applied stack in emission");
      std::vector<Doc> elems;
      for (const auto& a : args) elems.push_back(expr_at(a.expr, kTop));
      return iapp(txt("tensor_stack"),
                  {txt("[") + join(std::move(elems), ", ") + txt("]")});
    }
    auto* h = std::get_if<core::StdHead>(&s->v);
    if (!h)
      throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
    switch (*h) {
      case core::StdHead::Bool: return txt("bool");
      case core::StdHead::Real: return txt("real");
      case core::StdHead::Nat:
      case core::StdHead::Index: return txt("nat");
      case core::StdHead::Tensor: {
        auto dims = tensor_dims(spec_, core::rebuild_spine(sp), scope_.depth());
        if (!dims)
          throw Error(ErrorCode::TranslationError,
                      "tensor type without a concrete shape in emission");
        std::string name = shape_type_name(*dims);
        return maybe_parens(prec > kApp && name == "R tensor", txt(name));
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
        return parens(Doc::group(
            txt("if ") + expr_at(args[0].expr, kTop) +
            Doc::nest(2, Doc::line() + txt("then ") + expr_at(args[1].expr, kTop)) +
            Doc::nest(2, Doc::line() + txt("else ") + expr_at(args[2].expr, kTop))));
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
        Doc body = expr_at(lam->body, kTop);
        scope_.pop();
        return parens(Doc::group(txt("\\<forall> " + name + ".") +
                                 Doc::nest(2, Doc::line() + std::move(body))));
      }
      case core::StdHead::Lookup: return lookup_app(sp);
      case core::StdHead::Not: return not_unit(sp);
      case core::StdHead::And: return infix_chain(sp, "&", kAnd, true, prec);
      case core::StdHead::Or: return infix_chain(sp, "|", kOr, true, prec);
      case core::StdHead::Implies: return infix_chain(sp, "-->", kArrow, true, prec);
      case core::StdHead::Leq: return cmp_chain(sp, "<=", prec);
      case core::StdHead::Lt: return cmp_chain(sp, "<", prec);
      case core::StdHead::Eq: return cmp_chain(sp, "=", prec);
      case core::StdHead::Neq: return cmp_chain(sp, "~=", prec);
      case core::StdHead::Add: return infix_chain(sp, "+", kAdd, false, prec);
      case core::StdHead::Sub: return infix_chain(sp, "-", kAdd, false, prec);
      case core::StdHead::Mul: return infix_chain(sp, "*", kMul, false, prec);
      case core::StdHead::Div: return infix_chain(sp, "/", kMul, false, prec);
      case core::StdHead::Neg: {
        auto args = explicit_args(sp);
        if (args.size() != 1)
          throw Error(ErrorCode::TranslationError,
                      "partially applied primitive in emission");
        return parens(txt("- ") + expr_at(args[0].expr, kAtom));
      }
    }
    throw Error(ErrorCode::TranslationError, "unsupported builtin in emission");
  }

  const IrSpec& spec_;
  const EmitInfo& info_;
  NameScope scope_;
  std::vector<std::size_t> networks_;
  std::vector<std::size_t> properties_;
  std::vector<bool> lifted_;
  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> typedefs_;
};

}  // namespace

std::string emit_isabelle(const itp_ir::IrSpec& spec, const EmitInfo& info) {
  return IsabelleEmitter(spec, info).run();
}

}  // namespace vspec::backends
