#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/typecheck/meta_store.hpp"

namespace vspec::typecheck {

template <class B>
struct Generalised {
  core::Decl<B> decl;
  /// Abstracted instance-meta roots, outermost binder first. The pipeline
  /// drops their class constraints: the binder now carries the obligation.
  std::vector<std::uint32_t> roots;
};

/// Wraps a checked declaration in one instance-mode binder per unsolved
/// instance metavariable, turning "works for any Booleans representation"
/// from an accident of inference into explicit polymorphism. The declaration
/// must already be zonked.
template <class B>
Generalised<B> generalise(core::Decl<B> decl, MetaStore<B>& metas) {
  using E = core::Expr<B>;
  using Traits = core::AlphabetTraits<B>;

  std::vector<std::uint32_t> roots;
  auto collect = [&](const E& e) {
    core::for_each_node<B>(e, [&](const E& n) {
      if (auto* im = n.template get_if<typename E::InstanceMeta>()) {
        std::uint32_t r = metas.instance_root(im->id);
        if (!metas.instance_tag(r) &&
            std::find(roots.begin(), roots.end(), r) == roots.end())
          roots.push_back(r);
      }
    });
  };
  if (decl.type) collect(*decl.type);
  if (decl.body) collect(*decl.body);
  if (roots.empty()) return {std::move(decl), {}};

  const std::uint32_t k = static_cast<std::uint32_t>(roots.size());

  // One pass renumbers declaration references past the new binders and
  // rewrites each abstracted meta to the matching bound variable.
  auto abstract = [&](const E& e, std::uint32_t depth, auto&& self) -> E {
    return std::visit(
        [&](const auto& n) -> E {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, typename E::Var>) {
            return n.index >= depth ? E::var(n.index + k, e.span()) : e;
          } else if constexpr (std::is_same_v<T, typename E::InstanceMeta>) {
            std::uint32_t r = metas.instance_root(n.id);
            auto it = std::find(roots.begin(), roots.end(), r);
            if (it == roots.end()) return e;
            auto j = static_cast<std::uint32_t>(it - roots.begin());
            return E::var(depth + k - 1 - j, e.span());
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            return E::pi(n.binder, n.mode, self(n.domain, depth, self),
                         self(n.codomain, depth + 1, self), e.span());
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            std::optional<E> ann;
            if (n.annotation) ann = self(*n.annotation, depth, self);
            return E::lam(n.binder, n.mode, std::move(ann),
                          self(n.body, depth + 1, self), e.span());
          } else if constexpr (std::is_same_v<T, typename E::App>) {
            return E::app_m(self(n.fn, depth, self), self(n.arg, depth, self),
                            n.mode, e.span());
          } else {
            return e;
          }
        },
        e.node());
  };

  auto binder_name = [&](std::uint32_t j) {
    return k == 1 ? std::string("i") : "i" + std::to_string(j);
  };

  if (decl.type) {
    E t = abstract(*decl.type, 0, abstract);
    for (std::uint32_t j = k; j-- > 0;)
      t = E::pi(binder_name(j), core::BinderMode::Instance,
                Traits::instance_class_type(), std::move(t), decl.span);
    decl.type = std::move(t);
  }
  if (decl.body) {
    E b = abstract(*decl.body, 0, abstract);
    for (std::uint32_t j = k; j-- > 0;)
      b = E::lam(binder_name(j), core::BinderMode::Instance,
                 Traits::instance_class_type(), std::move(b), decl.span);
    decl.body = std::move(b);
  }
  return {std::move(decl), std::move(roots)};
}

}  // namespace vspec::typecheck
