#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/core/shape.hpp"
#include "vspec/core/whnf.hpp"
#include "vspec/diagnostics.hpp"
#include "vspec/itp_ir/builtins.hpp"
#include "vspec/rational.hpp"

namespace vspec::interp {

/// Concrete network semantics: either an affine map on the flattened
/// (row-major) input or a finite lookup table. Shapes are implicit in the
/// row widths; they are checked against the declared network type when the
/// binding is applied.
struct NetworkBinding {
  enum class Form { Affine, Table };
  Form form = Form::Affine;

  // Affine: out = weights * in + bias. weights is out_count rows of
  // in_count columns.
  std::vector<std::vector<Rational>> weights;
  std::vector<Rational> bias;

  // Table: flattened input -> flattened output, exact match.
  std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> table;

  std::size_t in_count() const {
    if (form == Form::Affine) return weights.empty() ? 0 : weights[0].size();
    return table.empty() ? 0 : table[0].first.size();
  }
  std::size_t out_count() const {
    if (form == Form::Affine) return weights.size();
    return table.empty() ? 0 : table[0].second.size();
  }

  std::vector<Rational> apply(const std::vector<Rational>& in) const {
    if (form == Form::Affine) {
      std::vector<Rational> out;
      out.reserve(weights.size());
      for (std::size_t r = 0; r < weights.size(); ++r) {
        Rational acc = bias[r];
        for (std::size_t c = 0; c < weights[r].size(); ++c)
          acc = acc + weights[r][c] * in[c];
        out.push_back(acc);
      }
      return out;
    }
    for (const auto& [key, val] : table)
      if (key == in) return val;
    throw Error(ErrorCode::EvalError,
                "network lookup table has no entry for this input");
  }
};

/// Parses the text form of a binding. Affine maps are written as one weight
/// row per line with `;` separating the matrix from the bias; tables as one
/// `inputs ; outputs` entry per line. Numbers are `p/q` or decimals.
NetworkBinding parse_network_binding(std::string_view text);

/// Evaluation result. Closures capture the local environment and the
/// declaration scope they were built under, since a function value can
/// escape into a context where more declarations are visible.
template <class B>
struct Value {
  struct BoolV {
    bool value;
  };
  struct NatV {
    std::uint64_t value;
  };
  struct IndexV {
    std::uint64_t i;
    std::uint64_t bound;  // i < bound
  };
  struct TensorV {
    std::vector<std::uint64_t> shape;
    std::vector<Rational> elems;  // row-major; count = product of shape
  };
  struct ClosureV {
    std::vector<Value> env;
    std::size_t visible;  // declarations in scope at capture
    core::Expr<B> lam;
  };

  std::variant<BoolV, NatV, IndexV, TensorV, ClosureV> v;

  Value() : v(BoolV{false}) {}
  Value(BoolV x) : v(std::move(x)) {}
  Value(NatV x) : v(std::move(x)) {}
  Value(IndexV x) : v(std::move(x)) {}
  Value(TensorV x) : v(std::move(x)) {}
  Value(ClosureV x) : v(std::move(x)) {}

  const BoolV* bool_v() const { return std::get_if<BoolV>(&v); }
  const NatV* nat_v() const { return std::get_if<NatV>(&v); }
  const IndexV* index_v() const { return std::get_if<IndexV>(&v); }
  const TensorV* tensor_v() const { return std::get_if<TensorV>(&v); }
  const ClosureV* closure_v() const { return std::get_if<ClosureV>(&v); }
};

/// Ground values compare across alphabets; closures never compare equal.
template <class A, class B>
bool ground_eq(const Value<A>& x, const Value<B>& y) {
  if (auto* a = x.bool_v()) {
    auto* b = y.bool_v();
    return b && a->value == b->value;
  }
  if (auto* a = x.nat_v()) {
    auto* b = y.nat_v();
    return b && a->value == b->value;
  }
  if (auto* a = x.index_v()) {
    auto* b = y.index_v();
    return b && a->i == b->i && a->bound == b->bound;
  }
  if (auto* a = x.tensor_v()) {
    auto* b = y.tensor_v();
    return b && a->shape == b->shape && a->elems == b->elems;
  }
  return false;
}

template <class B>
std::string value_to_string(const Value<B>& v) {
  if (auto* b = v.bool_v()) return b->value ? "true" : "false";
  if (auto* n = v.nat_v()) return std::to_string(n->value);
  if (auto* i = v.index_v())
    return std::to_string(i->i) + "<" + std::to_string(i->bound);
  if (auto* t = v.tensor_v()) {
    std::string s = "tensor[";
    for (std::size_t k = 0; k < t->shape.size(); ++k)
      s += (k ? "," : "") + std::to_string(t->shape[k]);
    s += "](";
    for (std::size_t k = 0; k < t->elems.size(); ++k)
      s += (k ? ", " : "") + t->elems[k].to_display_string();
    return s + ")";
  }
  return "<closure>";
}

namespace detail {

/// Uniform view of the evaluable builtins of both alphabets. Type-level
/// twins evaluate classically, exactly like their Boolean counterparts;
/// that convention is what the semantic-equivalence tests rely on.
enum class Op {
  If,
  Forall,
  Lookup,
  Leq,
  Lt,
  Eq,
  Neq,
  Not,
  And,
  Or,
  Implies,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
};

struct OpInfo {
  std::variant<Op, core::NatLit, core::BoolLit, core::TensorLit, core::StackOp>
      v;
};

inline std::optional<OpInfo> classify(const core::StandardBuiltin& b) {
  using H = core::StdHead;
  if (auto* n = b.nat_lit()) return OpInfo{*n};
  if (auto* bl = b.bool_lit()) return OpInfo{*bl};
  if (auto* t = b.tensor_lit()) return OpInfo{*t};
  if (auto* s = b.stack_op()) return OpInfo{*s};
  if (auto* h = std::get_if<H>(&b.v)) {
    switch (*h) {
      case H::If: return OpInfo{Op::If};
      case H::Forall: return OpInfo{Op::Forall};
      case H::Lookup: return OpInfo{Op::Lookup};
      case H::Leq: return OpInfo{Op::Leq};
      case H::Lt: return OpInfo{Op::Lt};
      case H::Eq: return OpInfo{Op::Eq};
      case H::Neq: return OpInfo{Op::Neq};
      case H::Not: return OpInfo{Op::Not};
      case H::And: return OpInfo{Op::And};
      case H::Or: return OpInfo{Op::Or};
      case H::Implies: return OpInfo{Op::Implies};
      case H::Add: return OpInfo{Op::Add};
      case H::Sub: return OpInfo{Op::Sub};
      case H::Mul: return OpInfo{Op::Mul};
      case H::Div: return OpInfo{Op::Div};
      case H::Neg: return OpInfo{Op::Neg};
      default: return std::nullopt;  // type formers are not values
    }
  }
  return std::nullopt;
}

inline std::optional<OpInfo> classify(const itp_ir::DecidabilityBuiltin& b) {
  using T = itp_ir::TypeHead;
  if (auto* s = b.standard()) return classify(*s);
  if (auto* h = b.type_head()) {
    switch (*h) {
      case T::TrueType: return OpInfo{core::BoolLit{true}};
      case T::FalseType: return OpInfo{core::BoolLit{false}};
      case T::NotType: return OpInfo{Op::Not};
      case T::AndType: return OpInfo{Op::And};
      case T::OrType: return OpInfo{Op::Or};
      case T::ImpliesType: return OpInfo{Op::Implies};
      case T::LeqType: return OpInfo{Op::Leq};
      case T::LtType: return OpInfo{Op::Lt};
      case T::EqType: return OpInfo{Op::Eq};
      case T::NeqType: return OpInfo{Op::Neq};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Call-by-value evaluator for ground, quantifier-free expressions over a
/// declaration prefix. `if` and the Boolean connectives evaluate only the
/// operands they need. Declaration values are memoised.
template <class B>
class Evaluator {
 public:
  using E = core::Expr<B>;
  using V = Value<B>;
  using TensorV = typename V::TensorV;

  Evaluator(const std::vector<core::Decl<B>>& decls,
            std::map<std::string, NetworkBinding> networks)
      : decls_(decls), networks_(std::move(networks)), memo_(decls.size()) {}

  /// Value of declaration i, with the coercion a declared type imposes on a
  /// bare literal (an Index-typed natural becomes IndexV).
  V eval_decl(std::size_t i) {
    if (memo_[i]) return *memo_[i];
    const core::Decl<B>& d = decls_[i];
    if (d.kind == core::DeclKind::Network)
      throw Error(ErrorCode::EvalError,
                  "network '" + d.name + "' must be applied directly", d.span);
    if (!d.body)
      throw Error(ErrorCode::MissingParameter,
                  "parameter '" + d.name + "' has no bound value", d.span);
    std::vector<V> locals;
    V v = go(*d.body, locals, i);
    if (d.type) v = coerce_to_type(std::move(v), *d.type, i);
    memo_[i] = v;
    return v;
  }

  /// Evaluates a closed expression built against the full declaration list.
  V eval(const E& e) {
    std::vector<V> locals;
    return go(e, locals, decls_.size());
  }

 private:
  V coerce_to_type(V v, const E& type, std::size_t visible) {
    auto* n = v.nat_v();
    if (!n) return v;
    E norm = core::whnf(type, decls_, 0);
    core::Spine<B> sp = core::spine_view(norm);
    (void)visible;
    if (core::detail::is_std_head_builtin(sp.head, core::StdHead::Index) &&
        sp.args.size() == 1) {
      auto bound = core::detail::std_nat_lit(
          core::whnf(sp.args[0].expr, decls_, 0));
      if (bound && n->value < *bound)
        return V(typename V::IndexV{n->value, *bound});
    }
    return v;
  }

  V decl_ref(std::size_t j, Span s) {
    if (j >= decls_.size())
      throw Error(ErrorCode::EvalError, "declaration reference out of range", s);
    return eval_decl(j);
  }

  V go(const E& e, std::vector<V>& locals, std::size_t visible) {
    if (auto* v = e.template get_if<typename E::Var>())
      return lookup_var(v->index, locals, visible, e.span());
    if (e.template get_if<typename E::Lam>())
      return V(typename V::ClosureV{locals, visible, e});
    if (auto* b = e.template get_if<typename E::Builtin>()) {
      auto info = detail::classify(b->value);
      if (!info)
        throw Error(ErrorCode::EvalError,
                    "this operation is not a runtime value", e.span());
      return nullary(*info, e.span());
    }
    if (e.template get_if<typename E::App>()) return apply_spine(e, locals, visible);
    if (e.template get_if<typename E::Universe>() ||
        e.template get_if<typename E::Pi>())
      throw Error(ErrorCode::EvalError, "cannot evaluate a type", e.span());
    throw Error(ErrorCode::EvalError, "hole in evaluated expression", e.span());
  }

  V lookup_var(std::uint32_t index, std::vector<V>& locals, std::size_t visible,
               Span s) {
    if (index < locals.size()) return locals[locals.size() - 1 - index];
    std::size_t back = index - locals.size();
    if (back >= visible)
      throw Error(ErrorCode::EvalError, "variable escapes its scope", s);
    std::size_t j = visible - 1 - back;
    if (decls_[j].kind == core::DeclKind::Network)
      throw Error(ErrorCode::EvalError,
                  "network '" + decls_[j].name + "' must be applied directly",
                  s);
    return decl_ref(j, s);
  }

  V apply_spine(const E& e, std::vector<V>& locals, std::size_t visible) {
    core::Spine<B> sp = core::spine_view(e);

    if (auto* b = sp.head.template get_if<typename E::Builtin>()) {
      auto info = detail::classify(b->value);
      if (!info)
        throw Error(ErrorCode::EvalError,
                    "this operation is not a runtime value", sp.head.span());
      std::vector<const E*> args;  // explicit arguments only
      for (const core::SpineArg<B>& a : sp.args)
        if (a.mode == core::BinderMode::Explicit) args.push_back(&a.expr);
      return builtin_spine(*info, args, locals, visible, e.span());
    }

    // A network reference in head position applies the external binding.
    if (auto* v = sp.head.template get_if<typename E::Var>()) {
      if (v->index >= locals.size()) {
        std::size_t back = v->index - locals.size();
        if (back < visible) {
          std::size_t j = visible - 1 - back;
          if (decls_[j].kind == core::DeclKind::Network)
            return apply_network(j, sp, locals, visible, e.span());
        }
      }
    }

    V fn = go(sp.head, locals, visible);
    for (const core::SpineArg<B>& a : sp.args) {
      if (a.mode != core::BinderMode::Explicit)
        throw Error(ErrorCode::EvalError,
                    "implicit argument applied to a runtime function",
                    a.expr.span());
      V arg = go(a.expr, locals, visible);
      fn = apply_closure(std::move(fn), std::move(arg), a.expr.span());
    }
    return fn;
  }

  V apply_closure(V fn, V arg, Span s) {
    auto* c = fn.closure_v();
    if (!c)
      throw Error(ErrorCode::EvalError, "applied a non-function value", s);
    auto* lam = c->lam.template get_if<typename E::Lam>();
    std::vector<V> env = c->env;
    env.push_back(std::move(arg));
    return go(lam->body, env, c->visible);
  }

  V apply_network(std::size_t j, const core::Spine<B>& sp,
                  std::vector<V>& locals, std::size_t visible, Span s) {
    const core::Decl<B>& d = decls_[j];
    auto it = networks_.find(d.name);
    if (it == networks_.end())
      throw Error(ErrorCode::UnboundNetwork,
                  "no binding for network '" + d.name + "'", s);
    const NetworkBinding& nb = it->second;

    std::vector<const E*> args;
    for (const core::SpineArg<B>& a : sp.args)
      if (a.mode == core::BinderMode::Explicit) args.push_back(&a.expr);
    if (args.size() != 1)
      throw Error(ErrorCode::EvalError,
                  "network '" + d.name + "' must be applied to one tensor", s);

    auto norm = [&](const E& x) { return core::whnf(x, decls_, 0); };
    E ty = norm(*d.type);
    auto* pi = ty.template get_if<typename E::Pi>();
    auto in_dims = core::tensor_real_dims(norm(pi->domain), norm);
    auto out_dims =
        core::tensor_real_dims(norm(core::shift(pi->codomain, -1)), norm);

    V in = go(*args[0], locals, visible);
    auto* t = in.tensor_v();
    if (!t || t->shape != *in_dims)
      throw Error(ErrorCode::ShapeMismatch,
                  "network '" + d.name + "' applied to a tensor of the wrong shape",
                  s);
    std::size_t out_n = 1;
    for (std::uint64_t dim : *out_dims) out_n *= dim;
    if (nb.in_count() != t->elems.size() || nb.out_count() != out_n)
      throw Error(ErrorCode::ShapeMismatch,
                  "binding for network '" + d.name +
                      "' does not match the declared type",
                  s);
    return V(TensorV{*out_dims, nb.apply(t->elems)});
  }

  V nullary(const detail::OpInfo& info, Span s) {
    if (auto* n = std::get_if<core::NatLit>(&info.v))
      return V(typename V::NatV{n->value});
    if (auto* b = std::get_if<core::BoolLit>(&info.v))
      return V(typename V::BoolV{b->value});
    if (auto* t = std::get_if<core::TensorLit>(&info.v))
      return V(TensorV{t->shape, t->elems});
    throw Error(ErrorCode::EvalError, "operator needs its arguments", s);
  }

  bool truth(const E& e, std::vector<V>& locals, std::size_t visible) {
    V v = go(e, locals, visible);
    auto* b = v.bool_v();
    if (!b)
      throw Error(ErrorCode::EvalError, "condition is not a truth value",
                  e.span());
    return b->value;
  }

  V builtin_spine(const detail::OpInfo& info, const std::vector<const E*>& args,
                  std::vector<V>& locals, std::size_t visible, Span s) {
    using detail::Op;
    if (auto* st = std::get_if<core::StackOp>(&info.v)) {
      if (args.size() != st->arity)
        throw Error(ErrorCode::EvalError, "stack applied to the wrong arity", s);
      return stack(args, locals, visible, s);
    }
    auto* op = std::get_if<Op>(&info.v);
    if (!op) {
      if (args.empty()) return nullary(info, s);
      throw Error(ErrorCode::EvalError, "literal applied to arguments", s);
    }

    switch (*op) {
      case Op::Forall:
        throw Error(ErrorCode::ForallNotEvaluable,
                    "a quantifier cannot be evaluated; quantified truth "
                    "belongs to the solver",
                    s);
      case Op::If: {
        need(args, 3, s);
        return truth(*args[0], locals, visible)
                   ? go(*args[1], locals, visible)
                   : go(*args[2], locals, visible);
      }
      case Op::Not: {
        need(args, 1, s);
        return V(typename V::BoolV{!truth(*args[0], locals, visible)});
      }
      case Op::And: {
        need(args, 2, s);
        bool r = truth(*args[0], locals, visible) &&
                 truth(*args[1], locals, visible);
        return V(typename V::BoolV{r});
      }
      case Op::Or: {
        need(args, 2, s);
        bool r = truth(*args[0], locals, visible) ||
                 truth(*args[1], locals, visible);
        return V(typename V::BoolV{r});
      }
      case Op::Implies: {
        need(args, 2, s);
        bool r = !truth(*args[0], locals, visible) ||
                 truth(*args[1], locals, visible);
        return V(typename V::BoolV{r});
      }
      case Op::Leq:
      case Op::Lt:
      case Op::Eq:
      case Op::Neq: {
        need(args, 2, s);
        V a = go(*args[0], locals, visible);
        V b = go(*args[1], locals, visible);
        return compare(*op, a, b, s);
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        need(args, 2, s);
        V a = go(*args[0], locals, visible);
        V b = go(*args[1], locals, visible);
        return arith(*op, a, b, s);
      }
      case Op::Neg: {
        need(args, 1, s);
        V a = go(*args[0], locals, visible);
        auto* t = a.tensor_v();
        if (!t) throw Error(ErrorCode::EvalError, "negating a non-tensor", s);
        TensorV out{t->shape, {}};
        out.elems.reserve(t->elems.size());
        for (const Rational& r : t->elems) out.elems.push_back(-r);
        return V(std::move(out));
      }
      case Op::Lookup: {
        need(args, 2, s);
        V t = go(*args[0], locals, visible);
        V i = go(*args[1], locals, visible);
        return lookup(t, i, s);
      }
    }
    throw Error(ErrorCode::EvalError, "unreachable", s);
  }

  static void need(const std::vector<const E*>& args, std::size_t n, Span s) {
    if (args.size() != n)
      throw Error(ErrorCode::EvalError, "operator applied to the wrong arity", s);
  }

  V stack(const std::vector<const E*>& args, std::vector<V>& locals,
          std::size_t visible, Span s) {
    std::vector<TensorV> parts;
    parts.reserve(args.size());
    for (const E* a : args) {
      V v = go(*a, locals, visible);
      auto* t = v.tensor_v();
      if (!t)
        throw Error(ErrorCode::EvalError, "stacking a non-tensor", s);
      if (!parts.empty() && t->shape != parts[0].shape)
        throw Error(ErrorCode::EvalError, "stacking tensors of unequal shape", s);
      parts.push_back(*t);
    }
    TensorV out;
    out.shape.push_back(args.size());
    if (!parts.empty())
      out.shape.insert(out.shape.end(), parts[0].shape.begin(),
                       parts[0].shape.end());
    for (const TensorV& p : parts)
      out.elems.insert(out.elems.end(), p.elems.begin(), p.elems.end());
    return V(std::move(out));
  }

  V lookup(const V& tv, const V& iv, Span s) {
    auto* t = tv.tensor_v();
    if (!t || t->shape.empty())
      throw Error(ErrorCode::EvalError, "indexing a non-tensor", s);
    std::uint64_t i;
    if (auto* n = iv.nat_v()) i = n->value;
    else if (auto* ix = iv.index_v()) i = ix->i;
    else throw Error(ErrorCode::EvalError, "index is not a natural", s);
    if (i >= t->shape[0])
      throw Error(ErrorCode::EvalError, "index beyond the leading dimension", s);
    TensorV out;
    out.shape.assign(t->shape.begin() + 1, t->shape.end());
    std::size_t row = t->elems.size() / t->shape[0];
    out.elems.assign(t->elems.begin() + static_cast<std::ptrdiff_t>(i * row),
                     t->elems.begin() + static_cast<std::ptrdiff_t>((i + 1) * row));
    return V(std::move(out));
  }

  V compare(detail::Op op, const V& a, const V& b, Span s) {
    using detail::Op;
    auto* ta = a.tensor_v();
    auto* tb = b.tensor_v();
    if (!ta || !tb || ta->shape != tb->shape)
      throw Error(ErrorCode::EvalError, "comparing unequal shapes", s);
    auto scalar = [&](const Rational& x, const Rational& y) {
      switch (op) {
        case Op::Leq: return x <= y;
        case Op::Lt: return x < y;
        case Op::Eq: return x == y;
        case Op::Neq: return x != y;
        default: return false;
      }
    };
    // Each comparison holds when its scalar form holds for every element.
    bool all = true;
    for (std::size_t k = 0; k < ta->elems.size(); ++k)
      all = all && scalar(ta->elems[k], tb->elems[k]);
    return V(typename V::BoolV{all});
  }

  V arith(detail::Op op, const V& a, const V& b, Span s) {
    using detail::Op;
    auto* ta = a.tensor_v();
    auto* tb = b.tensor_v();
    if (!ta || !tb || ta->shape != tb->shape)
      throw Error(ErrorCode::EvalError, "arithmetic on unequal shapes", s);
    TensorV out{ta->shape, {}};
    out.elems.reserve(ta->elems.size());
    for (std::size_t k = 0; k < ta->elems.size(); ++k) {
      const Rational& x = ta->elems[k];
      const Rational& y = tb->elems[k];
      switch (op) {
        case Op::Add: out.elems.push_back(x + y); break;
        case Op::Sub: out.elems.push_back(x - y); break;
        case Op::Mul: out.elems.push_back(x * y); break;
        case Op::Div: {
          if (y == Rational(0))
            throw Error(ErrorCode::EvalError, "division by zero", s);
          out.elems.push_back(x / y);
          break;
        }
        default: break;
      }
    }
    return V(std::move(out));
  }

  const std::vector<core::Decl<B>>& decls_;
  std::map<std::string, NetworkBinding> networks_;
  std::vector<std::optional<V>> memo_;
};

}  // namespace vspec::interp
