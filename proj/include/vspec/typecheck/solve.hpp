#pragma once

#include <string>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/core/pretty.hpp"
#include "vspec/typecheck/constraints.hpp"
#include "vspec/typecheck/meta_store.hpp"

namespace vspec::typecheck {

/// First-order unification up to whnf with occurs check, plus resolution of
/// NatLiteral constraints. Runs the queue to a fixpoint with postponement:
/// a constraint blocked on an unsolved metavariable is retried after others
/// make progress. Booleans constraints are tracked but never forced here;
/// the unsolved ones are what generalisation abstracts over.
template <class B>
class Solver {
 public:
  using E = core::Expr<B>;
  using Traits = core::AlphabetTraits<B>;

  Solver(const std::vector<core::Decl<B>>& prefix, MetaStore<B>& metas)
      : prefix_(prefix), metas_(metas) {}

  /// Solves what can be solved, throws on hard failures, and returns the
  /// residual constraints (Booleans plus anything still blocked).
  std::vector<Constraint<B>> run(std::vector<Constraint<B>> queue) {
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<Constraint<B>> next;
      for (Constraint<B>& c : queue) {
        if (attempt(c))
          progress = true;
        else
          next.push_back(std::move(c));
      }
      queue = std::move(next);
    }
    return queue;
  }

  /// One unification step tree; returns false when blocked on a meta whose
  /// solution must come from elsewhere.
  bool unify(const E& lhs, const E& rhs, std::uint32_t depth, bool shape_ctx,
             Span blame) {
    E a = metas_.normalize(lhs, prefix_, depth);
    E b = metas_.normalize(rhs, prefix_, depth);
    if (core::alpha_eq(a, b)) return true;

    if (auto* m = a.template get_if<typename E::Meta>()) return solve_meta(m->id, b, blame);
    if (auto* m = b.template get_if<typename E::Meta>()) return solve_meta(m->id, a, blame);

    if (auto* im = a.template get_if<typename E::InstanceMeta>())
      return solve_instance(im->id, b, blame);
    if (auto* im = b.template get_if<typename E::InstanceMeta>())
      return solve_instance(im->id, a, blame);

    // boolTC applied to an instance argument against a rigid sort forces
    // the instance: Bool commits it to BI, the type universe to TI.
    core::Spine<B> sa = core::spine_view(a);
    core::Spine<B> sb = core::spine_view(b);
    if (is_bool_tc_spine(sa) && !is_bool_tc_spine(sb)) {
      if (auto tag = Traits::tag_of_rigid_sort(b))
        return unify(sa.args[0].expr, Traits::tag_expr(*tag), depth, false, blame);
      fail(shape_ctx, a, b, blame);
    }
    if (is_bool_tc_spine(sb) && !is_bool_tc_spine(sa)) {
      if (auto tag = Traits::tag_of_rigid_sort(a))
        return unify(sb.args[0].expr, Traits::tag_expr(*tag), depth, false, blame);
      fail(shape_ctx, a, b, blame);
    }

    if (!sa.args.empty() || !sb.args.empty())
      return unify_spines(sa, sb, depth, shape_ctx, blame);

    return unify_rigid(a, b, depth, shape_ctx, blame);
  }

 private:
  bool attempt(Constraint<B>& c) {
    return std::visit(
        [&](auto& k) -> bool {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, UnifyConstraint<B>>) {
            return attempt_unify(k.lhs, k.rhs, k.depth, false, k.origin);
          } else if constexpr (std::is_same_v<T, ShapeEqConstraint<B>>) {
            return attempt_unify(k.lhs, k.rhs, k.depth, true, k.origin);
          } else if constexpr (std::is_same_v<T, NatLiteralConstraint<B>>) {
            return attempt_literal(k);
          } else {
            // Booleans constraints are discharged by forcing or by
            // generalisation, never by the fixpoint itself.
            return false;
          }
        },
        c);
  }

  bool attempt_unify(const E& lhs, const E& rhs, std::uint32_t depth, bool shape,
                     Span origin) {
    if (unify(lhs, rhs, depth, shape, origin)) return true;
    require_closed_for_postponement(lhs, rhs, depth, origin);
    return false;
  }

  bool attempt_literal(const NatLiteralConstraint<B>& k) {
    using T = core::TypeBuilders<B>;
    E t = metas_.normalize(k.type, prefix_, k.depth);

    if (t.template get_if<typename E::Meta>()) {
      require_closed_for_postponement(t, t, k.depth, k.origin);
      return false;
    }
    if (is_std_head(t, core::StdHead::Nat)) {
      metas_.solve(k.hole_meta, T::nlit(k.value), k.origin);
      return true;
    }
    core::Spine<B> sp = core::spine_view(t);
    if (is_std_head(sp.head, core::StdHead::Index) && sp.args.size() == 1) {
      E bound = metas_.normalize(sp.args[0].expr, prefix_, k.depth);
      if (bound.template get_if<typename E::Meta>()) {
        require_closed_for_postponement(bound, bound, k.depth, k.origin);
        return false;
      }
      auto* bound_b = bound.builtin_value();
      std::optional<std::uint64_t> bound_lit;
      if (bound_b) bound_lit = Traits::nat_literal(*bound_b);
      if (!bound_lit)
        throw Error(ErrorCode::UnificationFailure,
                    "index bound is not a literal dimension", k.origin);
      if (k.value >= *bound_lit)
        throw Error(ErrorCode::IndexOutOfBounds,
                    "index " + std::to_string(k.value) +
                        " is out of bounds for a dimension of size " +
                        std::to_string(*bound_lit),
                    k.origin);
      metas_.solve(k.hole_meta, T::nlit(k.value), k.origin);
      return true;
    }
    if (is_std_head(sp.head, core::StdHead::Tensor)) {
      // A bare literal at tensor type is a scalar real.
      if (!unify(t, T::scalar_real(), k.depth, true, k.origin)) {
        require_closed_for_postponement(t, t, k.depth, k.origin);
        return false;
      }
      core::TensorLit lit{{}, {Rational(static_cast<long>(k.value))}};
      metas_.solve(k.hole_meta, T::embed(core::StandardBuiltin(std::move(lit))),
                   k.origin);
      return true;
    }
    throw Error(ErrorCode::TypeMismatch,
                "numeric literal used where type " + core::pretty(t) +
                    " is expected",
                k.origin);
  }

  bool solve_meta(std::uint32_t id, const E& value, Span blame) {
    if (auto* m = value.template get_if<typename E::Meta>()) {
      // Orient meta/meta solutions deterministically.
      if (m->id == id) return true;
      if (m->id < id)
        metas_.solve(id, value, blame);
      else
        metas_.solve(m->id, E::meta(id), blame);
      return true;
    }
    if (MetaStore<B>::has_free_var(value))
      throw Error(ErrorCode::UnificationFailure,
                  "metavariable solution would capture a variable", blame);
    metas_.solve(id, value, blame);
    return true;
  }

  bool solve_instance(std::uint32_t id, const E& value, Span blame) {
    if (auto* im = value.template get_if<typename E::InstanceMeta>()) {
      metas_.alias_instance(id, im->id, blame);
      return true;
    }
    if (auto tag = Traits::as_tag(value)) {
      metas_.solve_instance(id, *tag, blame);
      return true;
    }
    throw Error(ErrorCode::UnificationFailure,
                "instance argument unified with a non-instance expression", blame);
  }

  bool is_bool_tc_spine(const core::Spine<B>& sp) const {
    if (sp.args.size() != 1) return false;
    auto* b = sp.head.builtin_value();
    return b && Traits::is_bool_tc(*b);
  }

  static bool is_std_head(const E& e, core::StdHead h) {
    auto* b = e.builtin_value();
    if (!b) return false;
    if constexpr (std::is_same_v<B, core::StandardBuiltin>) {
      return b->is_head(h);
    } else {
      return b->is_std_head(h);
    }
  }

  bool unify_spines(const core::Spine<B>& sa, const core::Spine<B>& sb,
                    std::uint32_t depth, bool shape_ctx, Span blame) {
    // An applied metavariable is stuck until the meta is solved.
    if (sa.head.template get_if<typename E::Meta>() ||
        sb.head.template get_if<typename E::Meta>())
      return false;
    if (sa.args.size() != sb.args.size())
      fail(shape_ctx, core::rebuild_spine(sa), core::rebuild_spine(sb), blame);
    if (!unify_rigid(sa.head, sb.head, depth, shape_ctx, blame)) return false;

    bool done = true;
    for (std::size_t i = 0; i < sa.args.size(); ++i) {
      if (sa.args[i].mode != sb.args[i].mode)
        throw Error(ErrorCode::UnificationFailure,
                    "application argument modes differ", blame);
      bool child_shape = arg_shape_context(sa.head, sa.args[i], i);
      done &= unify(sa.args[i].expr, sb.args[i].expr, depth, child_shape, blame);
    }
    return done;
  }

  /// Failures under shape formers report ShapeMismatch; dimensions live in
  /// Tensor's second argument, in Cons cells, in Index bounds, and in the
  /// inserted implicit arguments of the shape-polymorphic builtins.
  bool arg_shape_context(const E& head, const core::SpineArg<B>& arg,
                         std::size_t i) const {
    if (is_std_head(head, core::StdHead::Tensor)) return i == 1;
    if (is_std_head(head, core::StdHead::Cons)) return true;
    if (is_std_head(head, core::StdHead::Index)) return true;
    return head.builtin_value() != nullptr &&
           arg.mode == core::BinderMode::Implicit;
  }

  bool unify_rigid(const E& a, const E& b, std::uint32_t depth, bool shape_ctx,
                   Span blame) {
    const auto& na = a.node();
    const auto& nb = b.node();
    if (na.index() != nb.index()) fail(shape_ctx, a, b, blame);
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          const auto& y = std::get<T>(nb);
          if constexpr (std::is_same_v<T, typename E::Universe>) {
            return true;
          } else if constexpr (std::is_same_v<T, typename E::Var>) {
            if (x.index != y.index) fail(shape_ctx, a, b, blame);
            return true;
          } else if constexpr (std::is_same_v<T, typename E::Builtin>) {
            if (!(x.value == y.value)) fail(shape_ctx, a, b, blame);
            return true;
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            if (x.mode != y.mode) fail(shape_ctx, a, b, blame);
            bool d = unify(x.domain, y.domain, depth, false, blame);
            bool c = unify(x.codomain, y.codomain, depth + 1, false, blame);
            return d && c;
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            if (x.mode != y.mode) fail(shape_ctx, a, b, blame);
            bool ann = true;
            if (x.annotation && y.annotation)
              ann = unify(*x.annotation, *y.annotation, depth, false, blame);
            return ann && unify(x.body, y.body, depth + 1, false, blame);
          } else {
            // App handled by unify_spines; Meta/InstanceMeta handled above.
            fail(shape_ctx, a, b, blame);
            return false;
          }
        },
        na);
  }

  [[noreturn]] void fail(bool shape_ctx, const E& a, const E& b, Span blame) const {
    std::string msg = shape_ctx
                          ? "tensor shapes do not match: " + core::pretty(a) +
                                " vs " + core::pretty(b)
                          : "cannot unify " + core::pretty(a) + " with " +
                                core::pretty(b);
    throw Error(shape_ctx ? ErrorCode::ShapeMismatch : ErrorCode::UnificationFailure,
                msg, blame);
  }

  /// A postponed constraint outlives the current declaration's scope, so it
  /// may not mention local binders or declaration references. The classic
  /// offender is a quantified variable whose tensor shape nothing determines.
  void require_closed_for_postponement(const E& lhs, const E& rhs,
                                       std::uint32_t depth, Span origin) const {
    E a = metas_.normalize(lhs, prefix_, depth);
    E b = metas_.normalize(rhs, prefix_, depth);
    if (MetaStore<B>::has_free_var(a) || MetaStore<B>::has_free_var(b))
      throw Error(ErrorCode::UnresolvableConstraint,
                  "constraint blocked on an expression whose value is never "
                  "determined",
                  origin);
  }

  const std::vector<core::Decl<B>>& prefix_;
  MetaStore<B>& metas_;
};

}  // namespace vspec::typecheck
