#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vspec/diagnostics.hpp"
#include "vspec/rational.hpp"

namespace vspec::surface {

/// Surface types are first-order: scalars, shaped tensors, index sets,
/// arrows, and references to user type aliases.
struct SurfaceType {
  enum class Kind { Bool, Real, Tensor, Index, Arrow, Named };

  Kind kind;
  Span span;
  std::string name;                // Named
  std::vector<std::uint64_t> dims; // Tensor
  std::uint64_t bound = 0;         // Index
  std::vector<SurfaceType> kids;   // Tensor: [elem]; Arrow: [lhs, rhs]
};

/// One node per construct the listings use. Comparison chains are already
/// expanded here: the parser rewrites `a <= b <= c` into an `and` of the two
/// comparisons, duplicating the middle operand.
struct SurfaceExpr {
  enum class Kind {
    Var,
    BoolLit,
    NatLit,
    RealLit,
    App,     // kids: fn, arg
    Not,     // kids: operand
    Negate,  // kids: operand
    Binary,  // kids: lhs, rhs
    If,      // kids: cond, then, else
    Forall,  // name binds in kids[0]
    Let,     // name binds in kids[1]; kids[0] is the bound expression
    Vec,     // kids: elements
    Lookup,  // kids: tensor, index
  };

  enum class BinOp {
    And,
    Or,
    Implies,
    Leq,
    Lt,
    Geq,
    Gt,
    Eq,
    Neq,
    Add,
    Sub,
    Mul,
    Div,
  };

  Kind kind;
  Span span;
  std::string name;            // Var; binder of Forall/Let
  bool bvalue = false;         // BoolLit
  std::uint64_t nvalue = 0;    // NatLit
  Rational rvalue;             // RealLit (non-negative; sign is Negate)
  BinOp op = BinOp::And;       // Binary
  std::vector<SurfaceExpr> kids;
};

struct SurfaceDecl {
  enum class Kind { FunctionDef, Network, Property, Parameter, TypeAlias };

  Kind kind;
  Span span;
  std::vector<std::string> names;   // Parameter binds several; others one
  std::optional<SurfaceType> type;  // annotation / declared type / alias target
  std::vector<std::string> params;  // FunctionDef left-hand-side binders
  std::optional<SurfaceExpr> body;  // FunctionDef, Property

  const std::string& name() const { return names.front(); }
};

struct SurfaceSpec {
  std::vector<SurfaceDecl> decls;
};

}  // namespace vspec::surface
