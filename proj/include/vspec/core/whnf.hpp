#pragma once

#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"

namespace vspec::core {

/// Weak head normal form: beta reduction, unfolding of declaration
/// references that have bodies, and alphabet-specific head reductions
/// (instance member resolution in the decidability alphabet).
///
/// `decls` is the declaration prefix in scope and `depth` the number of
/// local binders, so Var k with k >= depth refers to
/// decls[decls.size() - 1 - (k - depth)].
template <class B>
Expr<B> whnf(Expr<B> e, const std::vector<Decl<B>>& decls, std::uint32_t depth) {
  using E = Expr<B>;
  std::vector<SpineArg<B>> stack;  // pending arguments, innermost last

  for (;;) {
    if (auto* app = e.template get_if<typename E::App>()) {
      stack.push_back({app->arg, app->mode});
      e = app->fn;
      continue;
    }
    if (auto* lam = e.template get_if<typename E::Lam>()) {
      if (!stack.empty()) {
        e = instantiate(lam->body, stack.back().expr);
        stack.pop_back();
        continue;
      }
      break;
    }
    if (auto* var = e.template get_if<typename E::Var>()) {
      if (var->index >= depth) {
        std::size_t decl_idx = decls.size() - 1 - (var->index - depth);
        const Decl<B>& d = decls[decl_idx];
        if (d.body) {
          // The body is closed at its own prefix of decl_idx declarations.
          e = shift(*d.body,
                    static_cast<std::int32_t>(depth + decls.size() - decl_idx));
          continue;
        }
      }
      break;
    }
    if (auto* b = e.template get_if<typename E::Builtin>()) {
      if (!stack.empty()) {
        std::vector<E> args;
        args.reserve(stack.size());
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
          args.push_back(it->expr);
        if (auto reduced = AlphabetTraits<B>::reduce(b->value, args)) {
          stack.erase(stack.end() - static_cast<std::ptrdiff_t>(reduced->consumed),
                      stack.end());
          e = reduced->expr;
          continue;
        }
      }
      break;
    }
    break;
  }

  for (auto it = stack.rbegin(); it != stack.rend(); ++it)
    e = E::app_m(std::move(e), it->expr, it->mode);
  return e;
}

}  // namespace vspec::core
