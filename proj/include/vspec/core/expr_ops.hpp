#pragma once

#include <cassert>
#include <functional>
#include <optional>

#include "vspec/core/expr.hpp"

namespace vspec::core {

/// Shifts free variables with index >= cutoff by `by`. Negative shifts
/// require that no free variable lands in the removed gap; that would be a
/// scoping bug in the caller, so it asserts.
template <class B>
Expr<B> shift(const Expr<B>& e, std::int32_t by, std::uint32_t cutoff = 0) {
  using E = Expr<B>;
  if (by == 0) return e;
  return std::visit(
      [&](const auto& n) -> E {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename E::Var>) {
          if (n.index < cutoff) return e;
          assert(by > 0 || n.index >= cutoff + static_cast<std::uint32_t>(-by));
          return E::var(static_cast<std::uint32_t>(n.index + by), e.span());
        } else if constexpr (std::is_same_v<T, typename E::Pi>) {
          return E::pi(n.binder, n.mode, shift(n.domain, by, cutoff),
                       shift(n.codomain, by, cutoff + 1), e.span());
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          std::optional<E> ann;
          if (n.annotation) ann = shift(*n.annotation, by, cutoff);
          return E::lam(n.binder, n.mode, std::move(ann), shift(n.body, by, cutoff + 1),
                        e.span());
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          return E::app_m(shift(n.fn, by, cutoff), shift(n.arg, by, cutoff), n.mode,
                          e.span());
        } else {
          return e;
        }
      },
      e.node());
}

/// Substitutes `repl` for Var `target` (counting from the current scope) and
/// leaves all other variables untouched. `repl` is shifted as it moves under
/// binders.
template <class B>
Expr<B> subst_var(const Expr<B>& e, std::uint32_t target, const Expr<B>& repl) {
  using E = Expr<B>;
  return std::visit(
      [&](const auto& n) -> E {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename E::Var>) {
          if (n.index == target) return shift(repl, static_cast<std::int32_t>(target));
          return e;
        } else if constexpr (std::is_same_v<T, typename E::Pi>) {
          return E::pi(n.binder, n.mode, subst_var(n.domain, target, repl),
                       subst_var(n.codomain, target + 1, repl), e.span());
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          std::optional<E> ann;
          if (n.annotation) ann = subst_var(*n.annotation, target, repl);
          return E::lam(n.binder, n.mode, std::move(ann),
                        subst_var(n.body, target + 1, repl), e.span());
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          return E::app_m(subst_var(n.fn, target, repl),
                          subst_var(n.arg, target, repl), n.mode, e.span());
        } else {
          return e;
        }
      },
      e.node());
}

/// Beta-instantiates a binder body: body[Var 0 := arg], shifting the
/// remaining free variables down by one.
template <class B>
Expr<B> instantiate(const Expr<B>& body, const Expr<B>& arg) {
  using E = Expr<B>;
  std::function<E(const E&, std::uint32_t)> go = [&](const E& e,
                                                     std::uint32_t depth) -> E {
    return std::visit(
        [&](const auto& n) -> E {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, typename E::Var>) {
            if (n.index == depth) return shift(arg, static_cast<std::int32_t>(depth));
            if (n.index > depth) return E::var(n.index - 1, e.span());
            return e;
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            return E::pi(n.binder, n.mode, go(n.domain, depth),
                         go(n.codomain, depth + 1), e.span());
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            std::optional<E> ann;
            if (n.annotation) ann = go(*n.annotation, depth);
            return E::lam(n.binder, n.mode, std::move(ann), go(n.body, depth + 1),
                          e.span());
          } else if constexpr (std::is_same_v<T, typename E::App>) {
            return E::app_m(go(n.fn, depth), go(n.arg, depth), n.mode, e.span());
          } else {
            return e;
          }
        },
        e.node());
  };
  return go(body, 0);
}

/// Alpha-equivalence: binder names and spans are ignored, everything else
/// (including binder modes and lambda annotations) must match.
template <class B>
bool alpha_eq(const Expr<B>& a, const Expr<B>& b) {
  using E = Expr<B>;
  if (a.same_rep(b)) return true;
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(nb);
        if constexpr (std::is_same_v<T, typename E::Universe>) {
          return true;
        } else if constexpr (std::is_same_v<T, typename E::Pi>) {
          return x.mode == y.mode && alpha_eq(x.domain, y.domain) &&
                 alpha_eq(x.codomain, y.codomain);
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          if (x.mode != y.mode) return false;
          if (x.annotation.has_value() != y.annotation.has_value()) return false;
          if (x.annotation && !alpha_eq(*x.annotation, *y.annotation)) return false;
          return alpha_eq(x.body, y.body);
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          return x.mode == y.mode && alpha_eq(x.fn, y.fn) && alpha_eq(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, typename E::Var>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, typename E::Builtin>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, typename E::Meta>) {
          return x.id == y.id;
        } else {
          return x.id == y.id;
        }
      },
      na);
}

template <class B>
void for_each_node(const Expr<B>& e, const std::function<void(const Expr<B>&)>& fn) {
  using E = Expr<B>;
  fn(e);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename E::Pi>) {
          for_each_node(n.domain, fn);
          for_each_node(n.codomain, fn);
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          if (n.annotation) for_each_node(*n.annotation, fn);
          for_each_node(n.body, fn);
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          for_each_node(n.fn, fn);
          for_each_node(n.arg, fn);
        }
      },
      e.node());
}

template <class B>
bool occurs_in_meta(const Expr<B>& e, std::uint32_t id) {
  bool found = false;
  for_each_node<B>(e, [&](const Expr<B>& x) {
    auto* m = x.template get_if<typename Expr<B>::Meta>();
    if (m && m->id == id) found = true;
  });
  return found;
}

template <class B>
bool contains_meta(const Expr<B>& e) {
  bool found = false;
  for_each_node<B>(e, [&](const Expr<B>& x) {
    if (x.template get_if<typename Expr<B>::Meta>()) found = true;
  });
  return found;
}

template <class B>
bool contains_instance_meta(const Expr<B>& e) {
  bool found = false;
  for_each_node<B>(e, [&](const Expr<B>& x) {
    if (x.template get_if<typename Expr<B>::InstanceMeta>()) found = true;
  });
  return found;
}

/// All variables bound, given `depth` enclosing binders.
template <class B>
bool well_scoped(const Expr<B>& e, std::uint32_t depth) {
  using E = Expr<B>;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename E::Var>) {
          return n.index < depth;
        } else if constexpr (std::is_same_v<T, typename E::Pi>) {
          return well_scoped(n.domain, depth) && well_scoped(n.codomain, depth + 1);
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          if (n.annotation && !well_scoped(*n.annotation, depth)) return false;
          return well_scoped(n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          return well_scoped(n.fn, depth) && well_scoped(n.arg, depth);
        } else {
          return true;
        }
      },
      e.node());
}

/// Application spine: `f a b c` becomes head f and args [a, b, c].
template <class B>
struct SpineArg {
  Expr<B> expr;
  BinderMode mode;
};

template <class B>
struct Spine {
  Expr<B> head;
  std::vector<SpineArg<B>> args;
};

template <class B>
Spine<B> spine_view(Expr<B> e) {
  std::vector<SpineArg<B>> rev;
  while (auto* app = e.template get_if<typename Expr<B>::App>()) {
    rev.push_back({app->arg, app->mode});
    e = app->fn;
  }
  return Spine<B>{std::move(e), {rev.rbegin(), rev.rend()}};
}

template <class B>
Expr<B> rebuild_spine(const Spine<B>& sp) {
  Expr<B> e = sp.head;
  for (const auto& a : sp.args) e = Expr<B>::app_m(e, a.expr, a.mode);
  return e;
}

/// Structure-preserving builtin translation. `fn` may map a builtin to any
/// closed expression over the target alphabet (e.g. a head applied to a
/// fresh instance metavariable).
template <class A, class B>
Expr<B> map_builtins(const Expr<A>& e,
                     const std::function<Expr<B>(const A&, Span)>& fn) {
  using EA = Expr<A>;
  using EB = Expr<B>;
  return std::visit(
      [&](const auto& n) -> EB {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename EA::Universe>) {
          return EB::universe(e.span());
        } else if constexpr (std::is_same_v<T, typename EA::Pi>) {
          return EB::pi(n.binder, n.mode, map_builtins<A, B>(n.domain, fn),
                        map_builtins<A, B>(n.codomain, fn), e.span());
        } else if constexpr (std::is_same_v<T, typename EA::Lam>) {
          std::optional<EB> ann;
          if (n.annotation) ann = map_builtins<A, B>(*n.annotation, fn);
          return EB::lam(n.binder, n.mode, std::move(ann),
                         map_builtins<A, B>(n.body, fn), e.span());
        } else if constexpr (std::is_same_v<T, typename EA::App>) {
          return EB::app_m(map_builtins<A, B>(n.fn, fn),
                           map_builtins<A, B>(n.arg, fn), n.mode, e.span());
        } else if constexpr (std::is_same_v<T, typename EA::Var>) {
          return EB::var(n.index, e.span());
        } else if constexpr (std::is_same_v<T, typename EA::Builtin>) {
          return fn(n.value, e.span());
        } else if constexpr (std::is_same_v<T, typename EA::Meta>) {
          return EB::meta(n.id, e.span());
        } else {
          return EB::instance_meta(n.id, e.span());
        }
      },
      e.node());
}

}  // namespace vspec::core
