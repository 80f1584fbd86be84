#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vspec/rational.hpp"

namespace vspec::core {

/// Builtin heads with no payload.
enum class StdHead : std::uint8_t {
  Nat,      // Type
  List,     // Type -> Type
  Nil,      // List Nat
  Cons,     // Nat -> List Nat -> List Nat
  Real,     // Type (scalar alias; the checker treats it as Tensor Real [])
  Bool,     // Type
  Index,    // Nat -> Type
  If,       // {t : Type} -> Bool -> t -> t -> t
  Tensor,   // Type -> List Nat -> Type
  Forall,   // {ds : List Nat} -> (Tensor Real ds -> Bool) -> Bool
  Lookup,   // {d : Nat} {ds : List Nat} -> Tensor Real (Cons d ds) -> Index d -> Tensor Real ds
  Leq,      // {ds : List Nat} -> Tensor Real ds -> Tensor Real ds -> Bool
  Lt,
  Eq,
  Neq,
  Not,      // Bool -> Bool
  And,      // Bool -> Bool -> Bool
  Or,
  Implies,
  Add,      // {ds : List Nat} -> Tensor Real ds -> Tensor Real ds -> Tensor Real ds
  Sub,
  Mul,
  Div,
  Neg,      // {ds : List Nat} -> Tensor Real ds -> Tensor Real ds
};

struct NatLit {
  std::uint64_t value;
  bool operator==(const NatLit&) const = default;
};

struct BoolLit {
  bool value;
  bool operator==(const BoolLit&) const = default;
};

/// Concrete tensor constant, row-major. Scalars have an empty shape and a
/// single element; real literals in source become scalar TensorLits.
struct TensorLit {
  std::vector<std::uint64_t> shape;
  std::vector<Rational> elems;
  bool operator==(const TensorLit&) const = default;
};

/// n-ary tensor introduction: Stack{n} : {ds} -> (Tensor Real ds)^n -> Tensor Real (Cons n ds).
struct StackOp {
  std::uint32_t arity;
  bool operator==(const StackOp&) const = default;
};

struct StandardBuiltin {
  std::variant<StdHead, NatLit, BoolLit, TensorLit, StackOp> v;

  StandardBuiltin(StdHead h) : v(h) {}
  StandardBuiltin(NatLit n) : v(n) {}
  StandardBuiltin(BoolLit b) : v(b) {}
  StandardBuiltin(TensorLit t) : v(std::move(t)) {}
  StandardBuiltin(StackOp s) : v(s) {}

  bool operator==(const StandardBuiltin&) const = default;

  bool is_head(StdHead h) const {
    auto* p = std::get_if<StdHead>(&v);
    return p && *p == h;
  }
  const NatLit* nat_lit() const { return std::get_if<NatLit>(&v); }
  const BoolLit* bool_lit() const { return std::get_if<BoolLit>(&v); }
  const TensorLit* tensor_lit() const { return std::get_if<TensorLit>(&v); }
  const StackOp* stack_op() const { return std::get_if<StackOp>(&v); }
};

const char* std_head_name(StdHead h);
std::string builtin_name(const StandardBuiltin& b);

/// True for the Boolean fragment that elaboration maps onto the type class:
/// Bool, BLit, Not, And, Or, Implies, Leq, Lt, Eq, Neq.
bool is_boolean_fragment(const StandardBuiltin& b);

}  // namespace vspec::core
