#include "vspec/core/builtins.hpp"

#include <sstream>

namespace vspec::core {

const char* std_head_name(StdHead h) {
  switch (h) {
    case StdHead::Nat: return "Nat";
    case StdHead::List: return "List";
    case StdHead::Nil: return "Nil";
    case StdHead::Cons: return "Cons";
    case StdHead::Real: return "Real";
    case StdHead::Bool: return "Bool";
    case StdHead::Index: return "Index";
    case StdHead::If: return "if";
    case StdHead::Tensor: return "Tensor";
    case StdHead::Forall: return "forall";
    case StdHead::Lookup: return "!";
    case StdHead::Leq: return "<=";
    case StdHead::Lt: return "<";
    case StdHead::Eq: return "==";
    case StdHead::Neq: return "!=";
    case StdHead::Not: return "not";
    case StdHead::And: return "and";
    case StdHead::Or: return "or";
    case StdHead::Implies: return "=>";
    case StdHead::Add: return "+";
    case StdHead::Sub: return "-";
    case StdHead::Mul: return "*";
    case StdHead::Div: return "/";
    case StdHead::Neg: return "neg";
  }
  return "?";
}

std::string builtin_name(const StandardBuiltin& b) {
  if (auto* h = std::get_if<StdHead>(&b.v)) return std_head_name(*h);
  if (auto* n = b.nat_lit()) return std::to_string(n->value);
  if (auto* bl = b.bool_lit()) return bl->value ? "true" : "false";
  if (auto* s = b.stack_op()) return "stack" + std::to_string(s->arity);
  auto* t = b.tensor_lit();
  std::ostringstream os;
  if (t->shape.empty()) {
    os << t->elems.front();
  } else {
    os << "tlit[";
    for (std::size_t i = 0; i < t->elems.size(); ++i) {
      if (i) os << ",";
      os << t->elems[i];
    }
    os << "]";
  }
  return os.str();
}

bool is_boolean_fragment(const StandardBuiltin& b) {
  if (b.bool_lit()) return true;
  auto* h = std::get_if<StdHead>(&b.v);
  if (!h) return false;
  switch (*h) {
    case StdHead::Bool:
    case StdHead::Not:
    case StdHead::And:
    case StdHead::Or:
    case StdHead::Implies:
    case StdHead::Leq:
    case StdHead::Lt:
    case StdHead::Eq:
    case StdHead::Neq:
      return true;
    default:
      return false;
  }
}

}  // namespace vspec::core
