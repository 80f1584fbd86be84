#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vspec/diagnostics.hpp"
#include "vspec/rational.hpp"
#include "vspec/surface/surface.hpp"

namespace vspec::surface {
namespace {

enum class Tok : std::uint8_t {
  Ident,
  NatNum,
  RealNum,
  KwType,
  KwIf,
  KwThen,
  KwElse,
  KwForall,
  KwLet,
  KwIn,
  KwNot,
  KwAnd,
  KwOr,
  KwTrue,
  KwFalse,
  AtNetwork,
  AtProperty,
  AtParameter,
  Colon,
  Equal,
  Comma,
  Semi,
  Dot,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Arrow,     // ->
  Implies,   // =>
  Leq,
  Geq,
  Lt,
  Gt,
  EqEq,
  NeqOp,
  Bang,
  Plus,
  Minus,
  Star,
  Slash,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::NatNum: return "natural number";
    case Tok::RealNum: return "decimal number";
    case Tok::KwType: return "'type'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwNot: return "'not'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::AtNetwork: return "'@network'";
    case Tok::AtProperty: return "'@property'";
    case Tok::AtParameter: return "'@parameter'";
    case Tok::Colon: return "':'";
    case Tok::Equal: return "'='";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Arrow: return "'->'";
    case Tok::Implies: return "'=>'";
    case Tok::Leq: return "'<='";
    case Tok::Geq: return "'>='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::EqEq: return "'=='";
    case Tok::NeqOp: return "'!='";
    case Tok::Bang: return "'!'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of file";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
  std::uint32_t column;  // 1-based; column 1 opens a new declaration item
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::uint32_t i = 0;
  std::uint32_t line_begin = 0;
  const auto n = static_cast<std::uint32_t>(src.size());

  auto push = [&](Tok k, std::uint32_t b, std::uint32_t e) {
    out.push_back(Token{k, src.substr(b, e - b), Span{b, e}, b - line_begin + 1});
  };

  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      line_begin = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    std::uint32_t b = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                       src[i] == '_' || src[i] == '\''))
        ++i;
      std::string_view w = src.substr(b, i - b);
      Tok k = Tok::Ident;
      if (w == "type") k = Tok::KwType;
      else if (w == "if") k = Tok::KwIf;
      else if (w == "then") k = Tok::KwThen;
      else if (w == "else") k = Tok::KwElse;
      else if (w == "forall") k = Tok::KwForall;
      else if (w == "let") k = Tok::KwLet;
      else if (w == "in") k = Tok::KwIn;
      else if (w == "not") k = Tok::KwNot;
      else if (w == "and") k = Tok::KwAnd;
      else if (w == "or") k = Tok::KwOr;
      else if (w == "true") k = Tok::KwTrue;
      else if (w == "false") k = Tok::KwFalse;
      push(k, b, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      bool real = false;
      if (i + 1 < n && src[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        real = true;
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      push(real ? Tok::RealNum : Tok::NatNum, b, i);
      continue;
    }
    if (c == '@') {
      ++i;
      while (i < n && std::isalpha(static_cast<unsigned char>(src[i]))) ++i;
      std::string_view w = src.substr(b, i - b);
      if (w == "@network") push(Tok::AtNetwork, b, i);
      else if (w == "@property") push(Tok::AtProperty, b, i);
      else if (w == "@parameter") push(Tok::AtParameter, b, i);
      else
        throw Error(ErrorCode::SyntaxError,
                    "unknown declaration marker '" + std::string(w) + "'",
                    Span{b, i});
      continue;
    }
    auto two = [&](char a, char d) {
      return c == a && i + 1 < n && src[i + 1] == d;
    };
    if (two('-', '>')) { push(Tok::Arrow, b, i += 2); continue; }
    if (two('=', '>')) { push(Tok::Implies, b, i += 2); continue; }
    if (two('<', '=')) { push(Tok::Leq, b, i += 2); continue; }
    if (two('>', '=')) { push(Tok::Geq, b, i += 2); continue; }
    if (two('=', '=')) { push(Tok::EqEq, b, i += 2); continue; }
    if (two('!', '=')) { push(Tok::NeqOp, b, i += 2); continue; }
    Tok k;
    switch (c) {
      case ':': k = Tok::Colon; break;
      case '=': k = Tok::Equal; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '.': k = Tok::Dot; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '!': k = Tok::Bang; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      default:
        throw Error(ErrorCode::SyntaxError,
                    std::string("unexpected character '") + c + "'",
                    Span{b, b + 1});
    }
    push(k, b, i + 1);
    ++i;
    continue;
  }
  out.push_back(Token{Tok::End, {}, Span{n, n}, 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SurfaceSpec parse() {
    SurfaceSpec spec;
    std::set<std::string> seen;
    while (!at(Tok::End)) {
      while (eat(Tok::Semi)) {}
      if (at(Tok::End)) break;
      SurfaceDecl d = parse_decl();
      for (const std::string& nm : d.names) {
        if (!seen.insert(nm).second)
          throw Error(ErrorCode::DuplicateDeclaration,
                      "'" + nm + "' is declared twice", d.span);
      }
      spec.decls.push_back(std::move(d));
    }
    return spec;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  const Token& expect(Tok k, const char* where) {
    if (!at(k))
      throw Error(ErrorCode::SyntaxError,
                  std::string("expected ") + tok_name(k) + " " + where +
                      " but found " + tok_name(peek().kind),
                  peek().span);
    return advance();
  }

  /// True when the next token opens a new declaration item: column 1 tokens
  /// do (continuation lines are indented), as do `;` and EOF.
  bool at_item_boundary() const {
    const Token& t = peek();
    return t.kind == Tok::End || t.kind == Tok::Semi || t.column == 1;
  }

  // ---- declarations ----

  SurfaceDecl parse_decl() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwType: return parse_alias();
      case Tok::AtNetwork: {
        advance();
        SurfaceDecl d = parse_annotation_item();
        d.kind = SurfaceDecl::Kind::Network;
        if (d.names.size() != 1)
          throw Error(ErrorCode::SyntaxError,
                      "a network declaration names exactly one network",
                      d.span);
        d.span = Span::join(t.span, d.span);
        return d;
      }
      case Tok::AtParameter: {
        advance();
        SurfaceDecl d = parse_annotation_item();
        d.kind = SurfaceDecl::Kind::Parameter;
        d.span = Span::join(t.span, d.span);
        return d;
      }
      case Tok::AtProperty: {
        advance();
        SurfaceDecl d = parse_property_body();
        d.span = Span::join(t.span, d.span);
        return d;
      }
      case Tok::Ident: return parse_function();
      default:
        throw Error(ErrorCode::SyntaxError,
                    std::string("expected a declaration (a name, 'type', or "
                                "an '@' marker) but found ") +
                        tok_name(t.kind),
                    t.span);
    }
  }

  SurfaceDecl parse_alias() {
    const Token& kw = advance();
    const Token& name = expect(Tok::Ident, "after 'type'");
    expect(Tok::Equal, "in type alias");
    SurfaceType ty = parse_type();
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::TypeAlias;
    d.names = {std::string(name.text)};
    d.type = std::move(ty);
    d.span = Span::join(kw.span, d.type->span);
    return d;
  }

  /// `name : TYPE` or `n1, n2, ... : TYPE`; used by @network and @parameter.
  SurfaceDecl parse_annotation_item() {
    SurfaceDecl d;
    const Token& first = expect(Tok::Ident, "in declaration");
    d.names = {std::string(first.text)};
    while (eat(Tok::Comma)) {
      const Token& more = expect(Tok::Ident, "after ','");
      d.names.push_back(std::string(more.text));
    }
    expect(Tok::Colon, "before the declared type");
    d.type = parse_type();
    d.span = Span::join(first.span, d.type->span);
    return d;
  }

  /// After `@property`: either `name = e`, or `name : Bool` then `name = e`.
  /// The annotation is checked and dropped; a property's sort is fixed.
  SurfaceDecl parse_property_body() {
    const Token& name = expect(Tok::Ident, "after '@property'");
    if (eat(Tok::Colon)) {
      SurfaceType ann = parse_type();
      if (ann.kind != SurfaceType::Kind::Bool)
        throw Error(ErrorCode::SyntaxError,
                    "a property annotation must be 'Bool'", ann.span);
      const Token& again = expect(Tok::Ident, "to define the property");
      if (again.text != name.text)
        throw Error(ErrorCode::SyntaxError,
                    "property '" + std::string(name.text) +
                        "' must be defined on the next line",
                    again.span);
    }
    expect(Tok::Equal, "in property definition");
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::Property;
    d.names = {std::string(name.text)};
    d.body = parse_expr();
    d.span = Span::join(name.span, d.body->span);
    return d;
  }

  /// `name : TYPE` followed by `name params = e`, or just `name params = e`.
  SurfaceDecl parse_function() {
    const Token& name = advance();
    SurfaceDecl d;
    d.kind = SurfaceDecl::Kind::FunctionDef;
    d.names = {std::string(name.text)};
    if (eat(Tok::Colon)) {
      d.type = parse_type();
      const Token& again = expect(Tok::Ident, "to define the annotated name");
      if (again.text != name.text)
        throw Error(ErrorCode::SyntaxError,
                    "definition of '" + std::string(again.text) +
                        "' does not match the annotation of '" +
                        std::string(name.text) + "' above it",
                    again.span);
    }
    while (at(Tok::Ident)) d.params.push_back(std::string(advance().text));
    expect(Tok::Equal, "in definition");
    d.body = parse_expr();
    d.span = Span::join(name.span, d.body->span);
    return d;
  }

  // ---- types ----

  SurfaceType parse_type() {
    SurfaceType lhs = parse_type_atom();
    if (eat(Tok::Arrow)) {
      SurfaceType rhs = parse_type();
      SurfaceType arrow;
      arrow.kind = SurfaceType::Kind::Arrow;
      arrow.span = Span::join(lhs.span, rhs.span);
      arrow.kids = {std::move(lhs), std::move(rhs)};
      return arrow;
    }
    return lhs;
  }

  SurfaceType parse_type_atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      advance();
      SurfaceType inner = parse_type();
      expect(Tok::RParen, "to close the type");
      return inner;
    }
    if (t.kind != Tok::Ident)
      throw Error(ErrorCode::SyntaxError,
                  std::string("expected a type but found ") + tok_name(t.kind),
                  t.span);
    advance();
    SurfaceType ty;
    ty.span = t.span;
    if (t.text == "Bool") {
      ty.kind = SurfaceType::Kind::Bool;
    } else if (t.text == "Real") {
      ty.kind = SurfaceType::Kind::Real;
    } else if (t.text == "Tensor") {
      ty.kind = SurfaceType::Kind::Tensor;
      ty.kids.push_back(parse_type_atom());
      expect(Tok::LBracket, "for the tensor shape");
      if (!at(Tok::RBracket)) {
        ty.dims.push_back(parse_nat("tensor dimension"));
        while (eat(Tok::Comma)) ty.dims.push_back(parse_nat("tensor dimension"));
      }
      const Token& close = expect(Tok::RBracket, "to close the tensor shape");
      ty.span = Span::join(t.span, close.span);
    } else if (t.text == "Index") {
      ty.kind = SurfaceType::Kind::Index;
      const Token& b = peek();
      ty.bound = parse_nat("index bound");
      ty.span = Span::join(t.span, b.span);
    } else {
      ty.kind = SurfaceType::Kind::Named;
      ty.name = std::string(t.text);
    }
    return ty;
  }

  std::uint64_t parse_nat(const char* what) {
    const Token& t = expect(Tok::NatNum, what);
    return std::stoull(std::string(t.text));
  }

  // ---- expressions ----
  // Binding, loosest to tightest: => | or | and | not | comparisons |
  // + - | * / | unary - | ! | application | atoms. Comparison chains
  // expand into conjunctions immediately.

  SurfaceExpr parse_expr() { return parse_implies(); }

  SurfaceExpr binary(SurfaceExpr::BinOp op, SurfaceExpr l, SurfaceExpr r) {
    SurfaceExpr e;
    e.kind = SurfaceExpr::Kind::Binary;
    e.op = op;
    e.span = Span::join(l.span, r.span);
    e.kids = {std::move(l), std::move(r)};
    return e;
  }

  SurfaceExpr parse_implies() {
    SurfaceExpr lhs = parse_or();
    if (!at_item_boundary() && eat(Tok::Implies))
      return binary(SurfaceExpr::BinOp::Implies, std::move(lhs), parse_implies());
    return lhs;
  }

  SurfaceExpr parse_or() {
    SurfaceExpr lhs = parse_and();
    while (!at_item_boundary() && eat(Tok::KwOr))
      lhs = binary(SurfaceExpr::BinOp::Or, std::move(lhs), parse_and());
    return lhs;
  }

  SurfaceExpr parse_and() {
    SurfaceExpr lhs = parse_not();
    while (!at_item_boundary() && eat(Tok::KwAnd))
      lhs = binary(SurfaceExpr::BinOp::And, std::move(lhs), parse_not());
    return lhs;
  }

  SurfaceExpr parse_not() {
    if (at(Tok::KwNot)) {
      const Token& t = advance();
      SurfaceExpr e;
      e.kind = SurfaceExpr::Kind::Not;
      e.kids.push_back(parse_not());
      e.span = Span::join(t.span, e.kids[0].span);
      return e;
    }
    return parse_comparison();
  }

  static std::optional<SurfaceExpr::BinOp> cmp_op(Tok k) {
    switch (k) {
      case Tok::Leq: return SurfaceExpr::BinOp::Leq;
      case Tok::Lt: return SurfaceExpr::BinOp::Lt;
      case Tok::Geq: return SurfaceExpr::BinOp::Geq;
      case Tok::Gt: return SurfaceExpr::BinOp::Gt;
      case Tok::EqEq: return SurfaceExpr::BinOp::Eq;
      case Tok::NeqOp: return SurfaceExpr::BinOp::Neq;
      default: return std::nullopt;
    }
  }

  SurfaceExpr parse_comparison() {
    SurfaceExpr first = parse_additive();
    std::vector<SurfaceExpr> operands;
    std::vector<SurfaceExpr::BinOp> ops;
    operands.push_back(std::move(first));
    while (!at_item_boundary()) {
      auto op = cmp_op(peek().kind);
      if (!op) break;
      advance();
      ops.push_back(*op);
      operands.push_back(parse_additive());
    }
    if (ops.empty()) return std::move(operands[0]);
    // a <= b <= c means (a <= b) and (b <= c); the middle operand is copied.
    SurfaceExpr acc = binary(ops[0], operands[0], operands[1]);
    for (std::size_t i = 1; i < ops.size(); ++i) {
      SurfaceExpr next = binary(ops[i], operands[i], operands[i + 1]);
      acc = binary(SurfaceExpr::BinOp::And, std::move(acc), std::move(next));
    }
    return acc;
  }

  SurfaceExpr parse_additive() {
    SurfaceExpr lhs = parse_multiplicative();
    while (!at_item_boundary() && (at(Tok::Plus) || at(Tok::Minus))) {
      SurfaceExpr::BinOp op =
          at(Tok::Plus) ? SurfaceExpr::BinOp::Add : SurfaceExpr::BinOp::Sub;
      advance();
      lhs = binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  SurfaceExpr parse_multiplicative() {
    SurfaceExpr lhs = parse_unary();
    while (!at_item_boundary() && (at(Tok::Star) || at(Tok::Slash))) {
      SurfaceExpr::BinOp op =
          at(Tok::Star) ? SurfaceExpr::BinOp::Mul : SurfaceExpr::BinOp::Div;
      advance();
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  SurfaceExpr parse_unary() {
    if (at(Tok::Minus)) {
      const Token& t = advance();
      SurfaceExpr e;
      e.kind = SurfaceExpr::Kind::Negate;
      e.kids.push_back(parse_unary());
      e.span = Span::join(t.span, e.kids[0].span);
      return e;
    }
    return parse_lookup();
  }

  SurfaceExpr parse_lookup() {
    SurfaceExpr lhs = parse_application();
    while (!at_item_boundary() && at(Tok::Bang)) {
      advance();
      SurfaceExpr idx = parse_application();
      SurfaceExpr e;
      e.kind = SurfaceExpr::Kind::Lookup;
      e.span = Span::join(lhs.span, idx.span);
      e.kids = {std::move(lhs), std::move(idx)};
      lhs = std::move(e);
    }
    return lhs;
  }

  bool at_atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::NatNum:
      case Tok::RealNum:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::LParen:
      case Tok::LBracket:
      case Tok::KwIf:
      case Tok::KwForall:
      case Tok::KwLet:
        return true;
      default:
        return false;
    }
  }

  SurfaceExpr parse_application() {
    SurfaceExpr fn = parse_atom();
    while (!at_item_boundary() && at_atom_start()) {
      SurfaceExpr arg = parse_atom();
      SurfaceExpr app;
      app.kind = SurfaceExpr::Kind::App;
      app.span = Span::join(fn.span, arg.span);
      app.kids = {std::move(fn), std::move(arg)};
      fn = std::move(app);
    }
    return fn;
  }

  SurfaceExpr parse_atom() {
    const Token& t = peek();
    SurfaceExpr e;
    e.span = t.span;
    switch (t.kind) {
      case Tok::Ident:
        advance();
        e.kind = SurfaceExpr::Kind::Var;
        e.name = std::string(t.text);
        return e;
      case Tok::KwTrue:
      case Tok::KwFalse:
        advance();
        e.kind = SurfaceExpr::Kind::BoolLit;
        e.bvalue = t.kind == Tok::KwTrue;
        return e;
      case Tok::NatNum:
        advance();
        e.kind = SurfaceExpr::Kind::NatLit;
        e.nvalue = std::stoull(std::string(t.text));
        return e;
      case Tok::RealNum: {
        advance();
        e.kind = SurfaceExpr::Kind::RealLit;
        auto r = Rational::parse_decimal(t.text);
        if (!r)
          throw Error(ErrorCode::SyntaxError,
                      "malformed decimal literal '" + std::string(t.text) + "'",
                      t.span);
        e.rvalue = *r;
        return e;
      }
      case Tok::LParen: {
        advance();
        SurfaceExpr inner = parse_expr();
        expect(Tok::RParen, "to close the expression");
        return inner;
      }
      case Tok::LBracket: {
        advance();
        e.kind = SurfaceExpr::Kind::Vec;
        if (!at(Tok::RBracket)) {
          e.kids.push_back(parse_expr());
          while (eat(Tok::Comma)) e.kids.push_back(parse_expr());
        }
        const Token& close = expect(Tok::RBracket, "to close the vector");
        e.span = Span::join(t.span, close.span);
        return e;
      }
      case Tok::KwIf: {
        advance();
        e.kind = SurfaceExpr::Kind::If;
        e.kids.push_back(parse_expr());
        expect(Tok::KwThen, "in conditional");
        e.kids.push_back(parse_expr());
        expect(Tok::KwElse, "in conditional");
        e.kids.push_back(parse_expr());
        e.span = Span::join(t.span, e.kids[2].span);
        return e;
      }
      case Tok::KwForall: {
        advance();
        e.kind = SurfaceExpr::Kind::Forall;
        e.name = std::string(expect(Tok::Ident, "after 'forall'").text);
        expect(Tok::Dot, "after the quantified variable");
        e.kids.push_back(parse_expr());
        e.span = Span::join(t.span, e.kids[0].span);
        return e;
      }
      case Tok::KwLet: {
        advance();
        e.kind = SurfaceExpr::Kind::Let;
        e.name = std::string(expect(Tok::Ident, "after 'let'").text);
        expect(Tok::Equal, "in let binding");
        e.kids.push_back(parse_expr());
        expect(Tok::KwIn, "after the bound expression");
        e.kids.push_back(parse_expr());
        e.span = Span::join(t.span, e.kids[1].span);
        return e;
      }
      default:
        throw Error(ErrorCode::SyntaxError,
                    std::string("expected an expression (a name, literal, "
                                "'(', '[', 'if', 'forall', or 'let') but "
                                "found ") +
                        tok_name(t.kind),
                    t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SurfaceSpec parse_spec(std::string_view source) { return Parser(source).parse(); }

}  // namespace vspec::surface
