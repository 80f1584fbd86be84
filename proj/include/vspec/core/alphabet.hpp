#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"

namespace vspec::core {

/// The two overlapping instances of the Booleans class: decidable Booleans
/// (executable bool) and the type-level / propositional reading.
enum class InstanceTag : std::uint8_t { BI, TI };

inline const char* instance_tag_name(InstanceTag t) {
  return t == InstanceTag::BI ? "Bool" : "Type";
}

/// Mints fresh instance metavariable ids during builtin conversion. The
/// typechecker registers each minted id as a Booleans constraint.
struct InstanceMetaMinter {
  std::uint32_t next = 0;
  std::vector<std::uint32_t> minted;
  std::uint32_t fresh() {
    minted.push_back(next);
    return next++;
  }
};

/// Result of a builtin head reduction: the replacement expression and how
/// many leading spine arguments it consumed.
template <class E>
struct HeadReduction {
  E expr;
  std::size_t consumed;
};

/// Per-alphabet knowledge the generic pipeline needs: builtin types, the
/// sort properties are checked at, the translation from the standard
/// builtins, and reduction/instance hooks. Specialised for StandardBuiltin
/// here and for the decidability alphabet in itp_ir.
template <class B>
struct AlphabetTraits;

template <>
struct AlphabetTraits<StandardBuiltin> {
  using B = StandardBuiltin;
  using E = Expr<B>;

  static constexpr bool has_instances = false;

  static E type_of(const B& b);
  static E property_sort() { return E::builtin(B(StdHead::Bool)); }

  static E convert_builtin(const StandardBuiltin& b, Span s, InstanceMetaMinter&) {
    return E::builtin(b, s);
  }

  static std::optional<std::uint64_t> nat_literal(const B& b) {
    if (auto* n = b.nat_lit()) return n->value;
    return std::nullopt;
  }

  /// Builtin-headed redexes; the standard alphabet has none (If on literal
  /// conditions is evaluation, not definitional equality).
  static std::optional<HeadReduction<E>> reduce(const B&, const std::vector<E>&) {
    return std::nullopt;
  }

  // Instance hooks; never reached because convert_builtin mints no metas.
  static std::optional<InstanceTag> tag_of_rigid_sort(const E&) { return std::nullopt; }
  static bool is_bool_tc(const B&) { return false; }
  static E tag_expr(InstanceTag) { return E::builtin(B(StdHead::Bool)); }
  static std::optional<InstanceTag> as_tag(const E&) { return std::nullopt; }
  static E instance_class_type() { return E::universe(); }
};

// Shared builders for builtin types over any alphabet embedding the standard
// one via `embed`.
template <class B>
struct TypeBuilders {
  using E = Expr<B>;
  static E embed(StandardBuiltin b) { return E::builtin(B(std::move(b))); }
  static E type() { return E::universe(); }
  static E nat() { return embed(StdHead::Nat); }
  static E bool_() { return embed(StdHead::Bool); }
  static E real() { return embed(StdHead::Real); }
  static E list_nat() { return E::app(embed(StdHead::List), nat()); }
  static E nlit(std::uint64_t n) { return embed(NatLit{n}); }
  static E nil() { return embed(StdHead::Nil); }
  static E cons(E head, E tail) {
    return E::apps(embed(StdHead::Cons), {std::move(head), std::move(tail)});
  }
  static E shape_list(const std::vector<std::uint64_t>& dims) {
    E e = nil();
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) e = cons(nlit(*it), e);
    return e;
  }
  static E tensor(E elem, E shape) {
    return E::apps(embed(StdHead::Tensor), {std::move(elem), std::move(shape)});
  }
  static E tensor_real(E shape) { return tensor(real(), std::move(shape)); }
  static E scalar_real() { return tensor_real(nil()); }
  static E index(E bound) { return E::app(embed(StdHead::Index), std::move(bound)); }

  static E implicit_pi(std::string name, E domain, E codomain) {
    return E::pi(std::move(name), BinderMode::Implicit, std::move(domain),
                 std::move(codomain));
  }

  /// {ds : List Nat} -> Tensor Real ds -> Tensor Real ds -> result(ds at
  /// depth 2). Shared shape of the comparison and arithmetic operators.
  static E shaped_binop(E result) {
    return implicit_pi(
        "ds", list_nat(),
        E::arrow(tensor_real(E::var(0)),
                 E::arrow(tensor_real(E::var(1)), std::move(result))));
  }

  /// Generic type of a standard builtin, with the property-level sort of
  /// comparisons and Forall given by `bool_sort` (Bool for the standard
  /// alphabet; overridden for Forall in the decidability alphabet).
  static E standard_type(const StandardBuiltin& b);
};

template <class B>
Expr<B> TypeBuilders<B>::standard_type(const StandardBuiltin& b) {
  using T = TypeBuilders<B>;
  if (b.nat_lit()) return T::nat();
  if (b.bool_lit()) return T::bool_();
  if (auto* t = b.tensor_lit()) return T::tensor_real(T::shape_list(t->shape));
  if (auto* st = b.stack_op()) {
    std::uint32_t k = st->arity;
    E ty = T::tensor_real(T::cons(T::nlit(k), E::var(k)));
    for (std::uint32_t j = k; j-- > 0;)
      ty = E::arrow(T::tensor_real(E::var(j)), std::move(ty));
    return T::implicit_pi("ds", T::list_nat(), std::move(ty));
  }
  switch (std::get<StdHead>(b.v)) {
    case StdHead::Nat:
    case StdHead::Real:
    case StdHead::Bool:
      return T::type();
    case StdHead::List:
      return E::arrow(T::type(), T::type());
    case StdHead::Nil:
      return T::list_nat();
    case StdHead::Cons:
      return E::arrow(T::nat(), E::arrow(T::list_nat(), T::list_nat()));
    case StdHead::Index:
      return E::arrow(T::nat(), T::type());
    case StdHead::If:
      return T::implicit_pi(
          "t", T::type(),
          E::arrow(T::bool_(),
                   E::arrow(E::var(1), E::arrow(E::var(2), E::var(3)))));
    case StdHead::Tensor:
      return E::arrow(T::type(), E::arrow(T::list_nat(), T::type()));
    case StdHead::Forall:
      return T::implicit_pi(
          "ds", T::list_nat(),
          E::arrow(E::arrow(T::tensor_real(E::var(0)), T::bool_()), T::bool_()));
    case StdHead::Lookup:
      return T::implicit_pi(
          "d", T::nat(),
          T::implicit_pi(
              "ds", T::list_nat(),
              E::arrow(T::tensor_real(T::cons(E::var(1), E::var(0))),
                       E::arrow(T::index(E::var(2)), T::tensor_real(E::var(2))))));
    case StdHead::Leq:
    case StdHead::Lt:
    case StdHead::Eq:
    case StdHead::Neq:
      return T::shaped_binop(T::bool_());
    case StdHead::Not:
      return E::arrow(T::bool_(), T::bool_());
    case StdHead::And:
    case StdHead::Or:
    case StdHead::Implies:
      return E::arrow(T::bool_(), E::arrow(T::bool_(), T::bool_()));
    case StdHead::Add:
    case StdHead::Sub:
    case StdHead::Mul:
    case StdHead::Div:
      return T::shaped_binop(T::tensor_real(E::var(2)));
    case StdHead::Neg:
      return T::implicit_pi(
          "ds", T::list_nat(),
          E::arrow(T::tensor_real(E::var(0)), T::tensor_real(E::var(1))));
  }
  return T::type();
}

inline Expr<StandardBuiltin> AlphabetTraits<StandardBuiltin>::type_of(
    const StandardBuiltin& b) {
  return TypeBuilders<StandardBuiltin>::standard_type(b);
}

}  // namespace vspec::core
