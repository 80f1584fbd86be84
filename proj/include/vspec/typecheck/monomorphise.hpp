#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"

namespace vspec::typecheck {

/// Replaces instance-polymorphic declarations by one copy per combination of
/// instance tags they are actually used at, resolving every class member to
/// its implementation. Demand flows from later declarations (uses) to earlier
/// ones (definitions), so demand collection walks the program backwards and
/// emission walks it forwards.
///
/// Copies are named by appending the tag names (negate -> negateBool,
/// negateType) unless only one copy exists, in which case the original name
/// is kept. Unused polymorphic declarations are pinned to all-Bool so that
/// downstream passes see no instance machinery at all.
template <class B>
core::Spec<B> monomorphise(const core::Spec<B>& spec) {
  using E = core::Expr<B>;
  using Traits = core::AlphabetTraits<B>;
  using Tuple = std::vector<core::InstanceTag>;
  // (user decl, user copy, position of the use inside that copy): the copy
  // order of a declaration follows the first use in program order.
  using UseKey = std::tuple<std::size_t, std::size_t, std::size_t>;

  const auto& decls = spec.decls;
  const std::size_t n = decls.size();

  auto arity = [&](std::size_t i) -> std::size_t {
    std::size_t k = 0;
    if (!decls[i].type) return 0;
    E t = *decls[i].type;
    while (auto* pi = t.template get_if<typename E::Pi>()) {
      if (pi->mode != core::BinderMode::Instance) break;
      ++k;
      t = pi->codomain;
    }
    return k;
  };

  // Strips `tuple.size()` leading instance binders by substituting the tags.
  auto specialise = [&](E e, const Tuple& tuple, bool is_type) -> E {
    for (core::InstanceTag tag : tuple) {
      if (is_type) {
        auto* pi = e.template get_if<typename E::Pi>();
        e = core::instantiate(pi->codomain, Traits::tag_expr(tag));
      } else {
        auto* lam = e.template get_if<typename E::Lam>();
        e = core::instantiate(lam->body, Traits::tag_expr(tag));
      }
    }
    return e;
  };

  // Reads the leading instance arguments of a use site as concrete tags.
  auto spine_tags = [&](const core::Spine<B>& sp, std::size_t k, std::size_t old_j,
                        Span blame) -> Tuple {
    if (sp.args.size() < k)
      throw Error(ErrorCode::TranslationError,
                  "'" + decls[old_j].name +
                      "' is used without supplying all of its instance "
                      "arguments, so it cannot be specialised",
                  blame);
    Tuple t;
    for (std::size_t a = 0; a < k; ++a) {
      auto tag = Traits::as_tag(sp.args[a].expr);
      if (sp.args[a].mode != core::BinderMode::Instance || !tag)
        throw Error(ErrorCode::TranslationError,
                    "'" + decls[old_j].name +
                        "' is used at an instance that never resolved to "
                        "Bool or Type",
                    blame);
      t.push_back(*tag);
    }
    return t;
  };

  // Demand collection, last declaration first: by the time declaration i is
  // reached every use of it has been scanned, so its copy list is final.
  std::vector<std::map<Tuple, UseKey>> demand(n);
  std::vector<std::vector<Tuple>> copies(n);

  for (std::size_t ii = n; ii-- > 0;) {
    const core::Decl<B>& d = decls[ii];
    std::size_t k = arity(ii);
    if (k == 0) {
      copies[ii] = {Tuple{}};
    } else if (demand[ii].empty()) {
      copies[ii] = {Tuple(k, core::InstanceTag::BI)};
    } else {
      std::vector<std::pair<UseKey, Tuple>> ordered;
      for (const auto& [t, key] : demand[ii]) ordered.push_back({key, t});
      std::sort(ordered.begin(), ordered.end());
      for (auto& [key, t] : ordered) copies[ii].push_back(std::move(t));
    }

    for (std::size_t ti = 0; ti < copies[ii].size(); ++ti) {
      std::size_t pos = 0;
      auto scan = [&](const E& e, std::uint32_t depth, auto&& self) -> void {
        if (auto* var = e.template get_if<typename E::Var>()) {
          if (var->index >= depth) {
            std::size_t old_j = ii - 1 - (var->index - depth);
            if (arity(old_j) > 0)
              throw Error(ErrorCode::TranslationError,
                          "'" + decls[old_j].name +
                              "' is instance-polymorphic and cannot be used "
                              "as a first-class value",
                          e.span());
          }
          return;
        }
        if (e.template get_if<typename E::App>()) {
          core::Spine<B> sp = core::spine_view(e);
          std::size_t from = 0;
          auto* var = sp.head.template get_if<typename E::Var>();
          if (var && var->index >= depth) {
            std::size_t old_j = ii - 1 - (var->index - depth);
            std::size_t kj = arity(old_j);
            if (kj > 0) {
              Tuple t = spine_tags(sp, kj, old_j, e.span());
              UseKey key{ii, ti, pos++};
              auto [it, fresh] = demand[old_j].emplace(std::move(t), key);
              if (!fresh) it->second = std::min(it->second, key);
              from = kj;
            }
          } else {
            self(sp.head, depth, self);
          }
          for (std::size_t a = from; a < sp.args.size(); ++a)
            self(sp.args[a].expr, depth, self);
          return;
        }
        std::visit(
            [&](const auto& node) {
              using T = std::decay_t<decltype(node)>;
              if constexpr (std::is_same_v<T, typename E::Pi>) {
                self(node.domain, depth, self);
                self(node.codomain, depth + 1, self);
              } else if constexpr (std::is_same_v<T, typename E::Lam>) {
                if (node.annotation) self(*node.annotation, depth, self);
                self(node.body, depth + 1, self);
              }
            },
            e.node());
      };
      if (d.type) {
        E t = specialise(*d.type, copies[ii][ti], true);
        scan(t, 0, scan);
      }
      if (d.body) {
        E b = specialise(*d.body, copies[ii][ti], false);
        scan(b, 0, scan);
      }
    }
  }

  // Emission: rewrite declaration references to the specialised copies and
  // run member reductions now that every instance argument is a tag.
  core::Spec<B> out;
  out.aliases = spec.aliases;
  std::vector<std::map<Tuple, std::size_t>> new_index(n);
  // Names kept verbatim are unique already; suffixed copies must dodge both
  // them and each other.
  std::set<std::string> used_names;
  for (std::size_t i = 0; i < n; ++i)
    if (copies[i].size() == 1) used_names.insert(decls[i].name);

  for (std::size_t i = 0; i < n; ++i) {
    const core::Decl<B>& d = decls[i];
    for (const Tuple& tuple : copies[i]) {
      const std::size_t i2 = out.decls.size();

      auto rewrite = [&](const E& e, std::uint32_t depth, auto&& self) -> E {
        if (auto* var = e.template get_if<typename E::Var>()) {
          if (var->index < depth) return e;
          std::size_t old_j = i - 1 - (var->index - depth);
          std::size_t nj = new_index[old_j].at(Tuple{});
          return E::var(static_cast<std::uint32_t>(depth + i2 - 1 - nj), e.span());
        }
        if (e.template get_if<typename E::App>()) {
          core::Spine<B> sp = core::spine_view(e);
          E head = sp.head;
          std::size_t from = 0;
          auto* var = sp.head.template get_if<typename E::Var>();
          if (var && var->index >= depth) {
            std::size_t old_j = i - 1 - (var->index - depth);
            std::size_t kj = arity(old_j);
            Tuple t;
            if (kj > 0) t = spine_tags(sp, kj, old_j, e.span());
            std::size_t nj = new_index[old_j].at(t);
            head = E::var(static_cast<std::uint32_t>(depth + i2 - 1 - nj),
                          sp.head.span());
            from = kj;
          } else {
            head = self(sp.head, depth, self);
          }
          std::vector<core::SpineArg<B>> args;
          for (std::size_t a = from; a < sp.args.size(); ++a)
            args.push_back({self(sp.args[a].expr, depth, self), sp.args[a].mode});
          // Member reduction: leqTC {{Bool}} .. becomes <= and so on.
          if (auto* hb = head.builtin_value()) {
            std::vector<E> plain;
            for (const auto& a : args) plain.push_back(a.expr);
            if (auto red = Traits::reduce(*hb, plain)) {
              head = red->expr;
              args.erase(args.begin(),
                         args.begin() + static_cast<std::ptrdiff_t>(red->consumed));
            }
          }
          E outp = std::move(head);
          for (auto& a : args) outp = E::app_m(std::move(outp), a.expr, a.mode, e.span());
          return outp;
        }
        return std::visit(
            [&](const auto& node) -> E {
              using T = std::decay_t<decltype(node)>;
              if constexpr (std::is_same_v<T, typename E::Pi>) {
                return E::pi(node.binder, node.mode, self(node.domain, depth, self),
                             self(node.codomain, depth + 1, self), e.span());
              } else if constexpr (std::is_same_v<T, typename E::Lam>) {
                std::optional<E> ann;
                if (node.annotation) ann = self(*node.annotation, depth, self);
                return E::lam(node.binder, node.mode, std::move(ann),
                              self(node.body, depth + 1, self), e.span());
              } else {
                return e;
              }
            },
            e.node());
      };

      core::Decl<B> copy;
      copy.kind = d.kind;
      copy.origin = d.name;
      copy.span = d.span;
      if (copies[i].size() == 1) {
        copy.name = d.name;
      } else {
        copy.name = d.name;
        for (core::InstanceTag tag : tuple) copy.name += core::instance_tag_name(tag);
        while (used_names.count(copy.name)) copy.name += "_";
        used_names.insert(copy.name);
      }
      if (d.type) copy.type = rewrite(specialise(*d.type, tuple, true), 0, rewrite);
      if (d.body) copy.body = rewrite(specialise(*d.body, tuple, false), 0, rewrite);

      new_index[i][tuple] = i2;
      out.decls.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace vspec::typecheck
