#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "vspec/core/alphabet.hpp"
#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/core/expr_ops.hpp"
#include "vspec/typecheck/check.hpp"
#include "vspec/typecheck/constraints.hpp"
#include "vspec/typecheck/generalise.hpp"
#include "vspec/typecheck/meta_store.hpp"
#include "vspec/typecheck/solve.hpp"

namespace vspec::typecheck {

/// Declaration-by-declaration elaboration. Constraints a declaration leaves
/// unsolved are retried after each later declaration, because a later use can
/// pin down an earlier hole (a body-only definition gets its element type
/// from its first use, for example); the final zonk pass writes those late
/// solutions back into the earlier declarations.
template <class B>
class Pipeline {
 public:
  using E = core::Expr<B>;
  using Traits = core::AlphabetTraits<B>;

  void push_decl(core::Decl<B> decl, const std::vector<std::uint32_t>& minted) {
    std::vector<Constraint<B>> cs;
    for (std::uint32_t id : minted)
      cs.push_back(Constraint<B>{BooleansConstraint{id, decl.span}});

    Checker<B> checker(out_.decls, metas_, cs);
    core::Decl<B> checked = checker.check_decl(decl);

    for (auto& c : pending_) cs.push_back(std::move(c));
    pending_.clear();
    Solver<B> solver(out_.decls, metas_);
    std::vector<Constraint<B>> residual = solver.run(std::move(cs));

    if (checked.type) checked.type = metas_.zonk(*checked.type);
    if (checked.body) checked.body = metas_.zonk(*checked.body);

    if (checked.kind == core::DeclKind::Network)
      validate_network_type(checked, *checked.type, out_.decls);
    else if (checked.kind == core::DeclKind::Parameter)
      validate_parameter_type(checked, *checked.type, out_.decls);

    // Properties are roots of instance demand, never generalised: anything
    // the property itself did not force decidable is read as a proposition.
    if (checked.kind == core::DeclKind::Property && Traits::has_instances) {
      default_to_type_level(checked);
      if (checked.type) checked.type = metas_.zonk(*checked.type);
      if (checked.body) checked.body = metas_.zonk(*checked.body);
    }

    Generalised<B> gen = generalise(std::move(checked), metas_);
    if (!gen.roots.empty()) {
      std::vector<Constraint<B>> kept;
      for (auto& c : residual) {
        auto* bc = std::get_if<BooleansConstraint>(&c);
        bool abstracted =
            bc && std::find(gen.roots.begin(), gen.roots.end(),
                            metas_.instance_root(bc->instance_meta)) != gen.roots.end();
        if (!abstracted) kept.push_back(std::move(c));
      }
      residual = std::move(kept);
    }

    pending_ = std::move(residual);
    out_.decls.push_back(std::move(gen.decl));
  }

  core::Spec<B> finish() {
    // Literals nothing constrains are natural numbers.
    for (;;) {
      Solver<B> solver(out_.decls, metas_);
      pending_ = solver.run(std::move(pending_));
      bool defaulted = false;
      for (Constraint<B>& c : pending_) {
        auto* nl = std::get_if<NatLiteralConstraint<B>>(&c);
        if (!nl) continue;
        E t = metas_.normalize(nl->type, out_.decls, 0);
        if (auto* m = t.template get_if<typename E::Meta>()) {
          metas_.solve(m->id, core::TypeBuilders<B>::nat(), nl->origin);
          defaulted = true;
          break;
        }
      }
      if (!defaulted) break;
    }

    for (const Constraint<B>& c : pending_) {
      if (std::holds_alternative<BooleansConstraint>(c)) continue;
      Span at = std::visit([](const auto& k) { return k.origin; }, c);
      throw Error(ErrorCode::UnresolvableConstraint,
                  "a typing constraint arising here was never resolved", at);
    }

    for (core::Decl<B>& d : out_.decls) {
      if (d.type) d.type = metas_.zonk(*d.type);
      if (d.body) d.body = metas_.zonk(*d.body);
      auto bad = [](const std::optional<E>& e) {
        return e && (core::contains_meta(*e) || core::contains_instance_meta(*e));
      };
      if (bad(d.type) || bad(d.body))
        throw Error(ErrorCode::UnresolvableConstraint,
                    "could not infer all types in declaration '" + d.name + "'",
                    d.span);
    }
    return std::move(out_);
  }

  MetaStore<B>& metas() { return metas_; }
  core::Spec<B>& spec() { return out_; }

 private:
  void default_to_type_level(const core::Decl<B>& d) {
    auto force = [&](const E& e) {
      core::for_each_node<B>(e, [&](const E& n) {
        if (auto* im = n.template get_if<typename E::InstanceMeta>()) {
          if (!metas_.instance_tag(im->id))
            metas_.solve_instance(im->id, core::InstanceTag::TI, n.span());
        }
      });
    };
    if (d.type) force(*d.type);
    if (d.body) force(*d.body);
  }

  MetaStore<B> metas_;
  std::vector<Constraint<B>> pending_;
  core::Spec<B> out_;
};

/// Elaborates a scope-resolved specification into the target alphabet:
/// typechecks every declaration, inserts implicit shape and instance
/// arguments, and abstracts unresolved instance choices into instance
/// binders. Monomorphisation is a separate pass.
template <class B>
core::Spec<B> type_spec(const core::Spec<core::StandardBuiltin>& surface) {
  Pipeline<B> p;
  p.spec().aliases = surface.aliases;
  for (const core::Decl<core::StandardBuiltin>& sd : surface.decls) {
    core::InstanceMetaMinter minter;
    minter.next = p.metas().instance_count();
    auto conv = [&](const core::StandardBuiltin& b, Span s) {
      return core::AlphabetTraits<B>::convert_builtin(b, s, minter);
    };
    core::Decl<B> d;
    d.kind = sd.kind;
    d.name = sd.name;
    d.origin = sd.origin.empty() ? sd.name : sd.origin;
    d.span = sd.span;
    if (sd.type) d.type = core::map_builtins<core::StandardBuiltin, B>(*sd.type, conv);
    if (sd.body) d.body = core::map_builtins<core::StandardBuiltin, B>(*sd.body, conv);
    p.metas().register_instance_metas(static_cast<std::uint32_t>(minter.minted.size()));
    p.push_decl(std::move(d), minter.minted);
  }
  return p.finish();
}

/// Re-typechecks an already elaborated specification without converting
/// builtins; elaboration output must pass this unchanged.
template <class B>
core::Spec<B> recheck_spec(const core::Spec<B>& spec) {
  Pipeline<B> p;
  p.spec().aliases = spec.aliases;
  for (const core::Decl<B>& d : spec.decls) p.push_decl(d, {});
  return p.finish();
}

}  // namespace vspec::typecheck
