#include <string>

#include "vspec/surface/surface.hpp"

namespace vspec::surface {
namespace {

// Binding strength used by the printer; must mirror the parser's ladder.
// 0 if/forall/let, 1 =>, 2 or, 3 and, 4 not, 5 comparisons, 6 + -, 7 * /,
// 8 unary minus, 9 !, 10 application, 11 atoms.
int expr_prec(const SurfaceExpr& e) {
  using K = SurfaceExpr::Kind;
  using O = SurfaceExpr::BinOp;
  switch (e.kind) {
    case K::If:
    case K::Forall:
    case K::Let: return 0;
    case K::Not: return 4;
    case K::Negate: return 8;
    case K::Lookup: return 9;
    case K::App: return 10;
    case K::Binary:
      switch (e.op) {
        case O::Implies: return 1;
        case O::Or: return 2;
        case O::And: return 3;
        case O::Leq:
        case O::Lt:
        case O::Geq:
        case O::Gt:
        case O::Eq:
        case O::Neq: return 5;
        case O::Add:
        case O::Sub: return 6;
        case O::Mul:
        case O::Div: return 7;
      }
      return 5;
    default: return 11;
  }
}

const char* op_text(SurfaceExpr::BinOp op) {
  using O = SurfaceExpr::BinOp;
  switch (op) {
    case O::And: return "and";
    case O::Or: return "or";
    case O::Implies: return "=>";
    case O::Leq: return "<=";
    case O::Lt: return "<";
    case O::Geq: return ">=";
    case O::Gt: return ">";
    case O::Eq: return "==";
    case O::Neq: return "!=";
    case O::Add: return "+";
    case O::Sub: return "-";
    case O::Mul: return "*";
    case O::Div: return "/";
  }
  return "?";
}

std::string print_expr(const SurfaceExpr& e, int min_prec) {
  using K = SurfaceExpr::Kind;
  int prec = expr_prec(e);
  std::string s;
  switch (e.kind) {
    case K::Var: s = e.name; break;
    case K::BoolLit: s = e.bvalue ? "true" : "false"; break;
    case K::NatLit: s = std::to_string(e.nvalue); break;
    case K::RealLit: {
      // Parsed literals are always finite decimals; the fraction fallback
      // covers synthetic trees only and does not re-parse as a literal.
      auto d = e.rvalue.to_decimal_string();
      s = d ? *d : e.rvalue.to_fraction_string();
      break;
    }
    case K::App:
      s = print_expr(e.kids[0], 10) + " " + print_expr(e.kids[1], 11);
      break;
    case K::Not: s = "not " + print_expr(e.kids[0], 4); break;
    case K::Negate: {
      std::string inner = print_expr(e.kids[0], 8);
      s = inner.empty() || inner[0] == '-' ? "- " + inner : "-" + inner;
      break;
    }
    case K::Binary: {
      int lp = prec;
      int rp = prec + 1;
      if (e.op == SurfaceExpr::BinOp::Implies) {
        lp = prec + 1;  // right-associative
        rp = prec;
      }
      s = print_expr(e.kids[0], lp) + " " + op_text(e.op) + " " +
          print_expr(e.kids[1], rp);
      break;
    }
    case K::If:
      s = "if " + print_expr(e.kids[0], 0) + " then " +
          print_expr(e.kids[1], 0) + " else " + print_expr(e.kids[2], 0);
      break;
    case K::Forall:
      s = "forall " + e.name + " . " + print_expr(e.kids[0], 0);
      break;
    case K::Let:
      s = "let " + e.name + " = " + print_expr(e.kids[0], 0) + " in " +
          print_expr(e.kids[1], 0);
      break;
    case K::Vec: {
      s = "[";
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += ", ";
        s += print_expr(e.kids[i], 1);
      }
      s += "]";
      break;
    }
    case K::Lookup:
      s = print_expr(e.kids[0], 9) + " ! " + print_expr(e.kids[1], 10);
      break;
  }
  if (prec < min_prec) return "(" + s + ")";
  return s;
}

std::string print_type(const SurfaceType& t, bool arrow_lhs) {
  using K = SurfaceType::Kind;
  std::string s;
  switch (t.kind) {
    case K::Bool: s = "Bool"; break;
    case K::Real: s = "Real"; break;
    case K::Named: s = t.name; break;
    case K::Index: s = "Index " + std::to_string(t.bound); break;
    case K::Tensor: {
      s = "Tensor " + print_type(t.kids[0], true) + " [";
      for (std::size_t i = 0; i < t.dims.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(t.dims[i]);
      }
      s += "]";
      break;
    }
    case K::Arrow:
      s = print_type(t.kids[0], true) + " -> " + print_type(t.kids[1], false);
      break;
  }
  if (arrow_lhs && t.kind == K::Arrow) return "(" + s + ")";
  return s;
}

}  // namespace

std::string pretty_type(const SurfaceType& t) { return print_type(t, false); }
std::string pretty_expr(const SurfaceExpr& e) { return print_expr(e, 0); }

std::string pretty_spec(const SurfaceSpec& spec) {
  std::string out;
  bool first = true;
  for (const SurfaceDecl& d : spec.decls) {
    if (!first) out += "\n";
    first = false;
    switch (d.kind) {
      case SurfaceDecl::Kind::TypeAlias:
        out += "type " + d.name() + " = " + pretty_type(*d.type) + "\n";
        break;
      case SurfaceDecl::Kind::Network:
        out += "@network\n" + d.name() + " : " + pretty_type(*d.type) + "\n";
        break;
      case SurfaceDecl::Kind::Parameter: {
        out += "@parameter\n";
        for (std::size_t i = 0; i < d.names.size(); ++i) {
          if (i) out += ", ";
          out += d.names[i];
        }
        out += " : " + pretty_type(*d.type) + "\n";
        break;
      }
      case SurfaceDecl::Kind::Property:
        out += "@property\n" + d.name() + " = " + pretty_expr(*d.body) + "\n";
        break;
      case SurfaceDecl::Kind::FunctionDef: {
        if (d.type) out += d.name() + " : " + pretty_type(*d.type) + "\n";
        out += d.name();
        for (const std::string& p : d.params) out += " " + p;
        out += " = " + pretty_expr(*d.body) + "\n";
        break;
      }
    }
  }
  return out;
}

static bool type_equal(const SurfaceType& a, const SurfaceType& b) {
  if (a.kind != b.kind || a.name != b.name || a.dims != b.dims ||
      a.bound != b.bound || a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!type_equal(a.kids[i], b.kids[i])) return false;
  return true;
}

bool expr_equal(const SurfaceExpr& a, const SurfaceExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.bvalue != b.bvalue ||
      a.nvalue != b.nvalue || !(a.rvalue == b.rvalue) || a.op != b.op ||
      a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!expr_equal(a.kids[i], b.kids[i])) return false;
  return true;
}

bool spec_equal(const SurfaceSpec& a, const SurfaceSpec& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const SurfaceDecl& x = a.decls[i];
    const SurfaceDecl& y = b.decls[i];
    if (x.kind != y.kind || x.names != y.names || x.params != y.params)
      return false;
    if (x.type.has_value() != y.type.has_value() ||
        (x.type && !type_equal(*x.type, *y.type)))
      return false;
    if (x.body.has_value() != y.body.has_value() ||
        (x.body && !expr_equal(*x.body, *y.body)))
      return false;
  }
  return true;
}

}  // namespace vspec::surface
