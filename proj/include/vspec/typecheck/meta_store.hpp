#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/core/whnf.hpp"
#include "vspec/diagnostics.hpp"

namespace vspec::typecheck {

/// Solutions for expression metavariables and the union-find over instance
/// metavariables. Expression solutions must be fully closed (no variables):
/// the shape discipline of the language guarantees closed solutions exist,
/// and it keeps solutions valid across declarations.
template <class B>
class MetaStore {
 public:
  using E = core::Expr<B>;

  std::uint32_t fresh_meta(Span origin = {}) {
    metas_.push_back({std::nullopt, origin});
    return static_cast<std::uint32_t>(metas_.size() - 1);
  }

  std::uint32_t register_instance_metas(std::uint32_t count) {
    std::uint32_t first = static_cast<std::uint32_t>(instances_.size());
    for (std::uint32_t i = 0; i < count; ++i) instances_.push_back({i + first, {}});
    return first;
  }

  bool is_solved(std::uint32_t id) const { return metas_[id].solution.has_value(); }
  const std::optional<E>& solution(std::uint32_t id) const {
    return metas_[id].solution;
  }

  void solve(std::uint32_t id, E value, Span blame) {
    if (core::occurs_in_meta(value, id))
      throw Error(ErrorCode::OccursCheckFailure,
                  "metavariable occurs in its own solution", blame);
    if (has_free_var(value))
      throw Error(ErrorCode::UnificationFailure,
                  "metavariable solution is not closed", blame);
    metas_[id].solution = std::move(value);
  }

  // Instance metas: union-find with an optional tag at the root.
  std::uint32_t instance_root(std::uint32_t id) const {
    while (instances_[id].parent != id) id = instances_[id].parent;
    return id;
  }

  std::optional<core::InstanceTag> instance_tag(std::uint32_t id) const {
    return instances_[instance_root(id)].tag;
  }

  void solve_instance(std::uint32_t id, core::InstanceTag tag, Span blame) {
    std::uint32_t root = instance_root(id);
    if (instances_[root].tag && *instances_[root].tag != tag)
      throw Error(ErrorCode::UnificationFailure,
                  std::string("conflicting instance resolutions: ") +
                      core::instance_tag_name(*instances_[root].tag) + " vs " +
                      core::instance_tag_name(tag),
                  blame);
    instances_[root].tag = tag;
  }

  void alias_instance(std::uint32_t a, std::uint32_t b, Span blame) {
    std::uint32_t ra = instance_root(a), rb = instance_root(b);
    if (ra == rb) return;
    // Keep the lower id as root so output order is stable.
    if (ra > rb) std::swap(ra, rb);
    if (instances_[rb].tag) {
      if (instances_[ra].tag && *instances_[ra].tag != *instances_[rb].tag)
        throw Error(ErrorCode::UnificationFailure,
                    "conflicting instance resolutions", blame);
      instances_[ra].tag = instances_[rb].tag;
    }
    instances_[rb].parent = ra;
  }

  std::uint32_t instance_count() const {
    return static_cast<std::uint32_t>(instances_.size());
  }

  /// Deep substitution of solved metavariables; idempotent because
  /// solutions are themselves zonked on the way in here.
  E zonk(const E& e) const {
    return std::visit(
        [&](const auto& n) -> E {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, typename E::Meta>) {
            if (metas_[n.id].solution) return zonk(*metas_[n.id].solution);
            return e;
          } else if constexpr (std::is_same_v<T, typename E::InstanceMeta>) {
            std::uint32_t root = instance_root(n.id);
            if (instances_[root].tag)
              return core::AlphabetTraits<B>::tag_expr(*instances_[root].tag);
            if (root != n.id) return E::instance_meta(root, e.span());
            return e;
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            return E::pi(n.binder, n.mode, zonk(n.domain), zonk(n.codomain), e.span());
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            std::optional<E> ann;
            if (n.annotation) ann = zonk(*n.annotation);
            return E::lam(n.binder, n.mode, std::move(ann), zonk(n.body), e.span());
          } else if constexpr (std::is_same_v<T, typename E::App>) {
            return E::app_m(zonk(n.fn), zonk(n.arg), n.mode, e.span());
          } else {
            return e;
          }
        },
        e.node());
  }

  /// zonk + whnf to a fixpoint: whnf can expose solved metas by unfolding
  /// declaration bodies that still contained them.
  E normalize(const E& e, const std::vector<core::Decl<B>>& decls,
              std::uint32_t depth) const {
    E cur = core::whnf(zonk(e), decls, depth);
    for (;;) {
      E next = core::whnf(zonk(cur), decls, depth);
      if (core::alpha_eq(next, cur)) return next;
      cur = std::move(next);
    }
  }

  static bool has_free_var(const E& e) { return !core::well_scoped(e, 0); }

 private:
  struct MetaEntry {
    std::optional<E> solution;
    Span origin;
  };
  struct InstanceEntry {
    std::uint32_t parent;
    std::optional<core::InstanceTag> tag;
  };
  std::vector<MetaEntry> metas_;
  std::vector<InstanceEntry> instances_;
};

}  // namespace vspec::typecheck
