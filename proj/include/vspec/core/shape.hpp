#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"

namespace vspec::core {

namespace detail {

template <class B>
bool is_std_head_builtin(const Expr<B>& e, StdHead h) {
  auto* b = e.builtin_value();
  if (!b) return false;
  if constexpr (std::is_same_v<B, StandardBuiltin>) {
    return b->is_head(h);
  } else {
    return b->is_std_head(h);
  }
}

template <class B>
std::optional<std::uint64_t> std_nat_lit(const Expr<B>& e) {
  auto* b = e.builtin_value();
  if (!b) return std::nullopt;
  if constexpr (std::is_same_v<B, StandardBuiltin>) {
    if (auto* n = b->nat_lit()) return n->value;
  } else {
    if (auto* s = b->standard())
      if (auto* n = s->nat_lit()) return n->value;
  }
  return std::nullopt;
}

}  // namespace detail

/// Reads a concrete shape list (a Cons/Nil chain of literals) out of a
/// normalised expression. `norm` re-normalises the tails as the chain is
/// walked. Returns nullopt if any dimension or tail is not concrete.
template <class B, class NormFn>
std::optional<std::vector<std::uint64_t>> shape_dims(Expr<B> shape, NormFn&& norm) {
  std::vector<std::uint64_t> dims;
  for (;;) {
    Expr<B> cur = norm(shape);
    if (detail::is_std_head_builtin(cur, StdHead::Nil)) return dims;
    Spine<B> sp = spine_view(cur);
    if (!detail::is_std_head_builtin(sp.head, StdHead::Cons) || sp.args.size() != 2)
      return std::nullopt;
    auto head = detail::std_nat_lit(norm(sp.args[0].expr));
    if (!head) return std::nullopt;
    dims.push_back(*head);
    shape = sp.args[1].expr;
  }
}

/// Matches `Tensor Real <shape>` with a concrete shape; scalars give {}.
template <class B, class NormFn>
std::optional<std::vector<std::uint64_t>> tensor_real_dims(const Expr<B>& normalised,
                                                           NormFn&& norm) {
  Spine<B> sp = spine_view(normalised);
  if (!detail::is_std_head_builtin(sp.head, StdHead::Tensor) || sp.args.size() != 2)
    return std::nullopt;
  if (!detail::is_std_head_builtin(norm(sp.args[0].expr), StdHead::Real))
    return std::nullopt;
  return shape_dims(sp.args[1].expr, norm);
}

/// True when the codomain of a binder actually mentions the bound variable.
template <class B>
bool depends_on_var0(const Expr<B>& e, std::uint32_t depth = 0) {
  using E = Expr<B>;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, typename E::Var>) {
          return n.index == depth;
        } else if constexpr (std::is_same_v<T, typename E::Pi>) {
          return depends_on_var0(n.domain, depth) ||
                 depends_on_var0(n.codomain, depth + 1);
        } else if constexpr (std::is_same_v<T, typename E::Lam>) {
          if (n.annotation && depends_on_var0(*n.annotation, depth)) return true;
          return depends_on_var0(n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, typename E::App>) {
          return depends_on_var0(n.fn, depth) || depends_on_var0(n.arg, depth);
        } else {
          return false;
        }
      },
      e.node());
}

}  // namespace vspec::core
