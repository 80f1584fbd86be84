#pragma once

#include <cstdint>
#include <variant>

#include "vspec/core/expr.hpp"

namespace vspec::typecheck {

/// How a bare numeric literal was resolved: as a Nat, as an index into a
/// dimension of a known bound, or as a scalar real.
enum class NatSolutionKind : std::uint8_t { AsNat, AsIndex, AsReal };

/// lhs and rhs live at `depth` local binders under the declaration prefix
/// current when the constraint was emitted.
template <class B>
struct UnifyConstraint {
  core::Expr<B> lhs;
  core::Expr<B> rhs;
  std::uint32_t depth;
  Span origin;
};

/// Same as UnifyConstraint but over tensor shapes, so failures report
/// ShapeMismatch rather than a generic unification error.
template <class B>
struct ShapeEqConstraint {
  core::Expr<B> lhs;
  core::Expr<B> rhs;
  std::uint32_t depth;
  Span origin;
};

/// A bare literal `value` whose elaboration is the hole `hole_meta`; once
/// `type` resolves, the hole becomes NLit (Nat / Index) or a scalar
/// TensorLit (Real).
template <class B>
struct NatLiteralConstraint {
  std::uint64_t value;
  std::uint32_t hole_meta;
  core::Expr<B> type;
  std::uint32_t depth;
  Span origin;
};

/// An instance metavariable that must resolve to one of the two Booleans
/// instances. Unresolved ones are what generalisation abstracts over.
struct BooleansConstraint {
  std::uint32_t instance_meta;
  Span origin;
};

template <class B>
using Constraint = std::variant<UnifyConstraint<B>, ShapeEqConstraint<B>,
                                NatLiteralConstraint<B>, BooleansConstraint>;

}  // namespace vspec::typecheck
