#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vspec/diagnostics.hpp"

namespace vspec::core {

enum class BinderMode : std::uint8_t {
  Explicit,  // (x : T) -> ...
  Implicit,  // {x : T} -> ...   inserted shape/type arguments
  Instance,  // {{x : T}} -> ... type-class instance arguments
};

/// Dependently typed core term over a builtin alphabet B. Immutable and
/// cheaply copyable; structural sharing is pervasive, so rewrites allocate
/// only along the spine they change. Variables are de Bruijn indices.
template <class B>
class Expr {
 public:
  struct Universe {};
  struct Pi {
    std::string binder;
    BinderMode mode;
    Expr domain;
    Expr codomain;  // scope: binder is Var 0
  };
  struct Lam {
    std::string binder;
    BinderMode mode;
    std::optional<Expr> annotation;
    Expr body;  // scope: binder is Var 0
  };
  struct App {
    Expr fn;
    Expr arg;
    // How the argument was passed; inserted implicit/instance arguments are
    // marked so elaborated code can be re-typechecked without guessing.
    BinderMode mode;
  };
  struct Var {
    std::uint32_t index;
  };
  struct Builtin {
    B value;
  };
  struct Meta {
    std::uint32_t id;
  };
  struct InstanceMeta {
    std::uint32_t id;
  };

  using Node = std::variant<Universe, Pi, Lam, App, Var, Builtin, Meta, InstanceMeta>;

  static Expr universe(Span s = {}) { return make(Universe{}, s); }
  static Expr pi(std::string binder, BinderMode mode, Expr domain, Expr codomain,
                 Span s = {}) {
    return make(Pi{std::move(binder), mode, std::move(domain), std::move(codomain)}, s);
  }
  static Expr arrow(Expr domain, Expr codomain, Span s = {}) {
    return pi("_", BinderMode::Explicit, std::move(domain), std::move(codomain), s);
  }
  static Expr lam(std::string binder, BinderMode mode, std::optional<Expr> annotation,
                  Expr body, Span s = {}) {
    return make(Lam{std::move(binder), mode, std::move(annotation), std::move(body)}, s);
  }
  static Expr app(Expr fn, Expr arg, Span s = {}) {
    return app_m(std::move(fn), std::move(arg), BinderMode::Explicit, s);
  }
  static Expr app_m(Expr fn, Expr arg, BinderMode mode, Span s = {}) {
    if (s.begin == 0 && s.end == 0) s = Span::join(fn.span(), arg.span());
    return make(App{std::move(fn), std::move(arg), mode}, s);
  }
  static Expr apps(Expr fn, const std::vector<Expr>& args) {
    Expr e = std::move(fn);
    for (const Expr& a : args) e = app(e, a);
    return e;
  }
  static Expr var(std::uint32_t index, Span s = {}) { return make(Var{index}, s); }
  static Expr builtin(B value, Span s = {}) { return make(Builtin{std::move(value)}, s); }
  static Expr meta(std::uint32_t id, Span s = {}) { return make(Meta{id}, s); }
  static Expr instance_meta(std::uint32_t id, Span s = {}) {
    return make(InstanceMeta{id}, s);
  }

  const Node& node() const { return rep_->node; }
  Span span() const { return rep_->span; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&rep_->node);
  }

  bool is_universe() const { return get_if<Universe>() != nullptr; }
  const B* builtin_value() const {
    auto* b = get_if<Builtin>();
    return b ? &b->value : nullptr;
  }

  /// Pointer identity; used only as a sharing fast-path.
  bool same_rep(const Expr& o) const { return rep_ == o.rep_; }

 private:
  struct Rep {
    Node node;
    Span span;
  };
  static Expr make(Node n, Span s) {
    Expr e;
    e.rep_ = std::make_shared<const Rep>(Rep{std::move(n), s});
    return e;
  }
  Expr() = default;
  std::shared_ptr<const Rep> rep_;
};

enum class DeclKind : std::uint8_t { Function, Network, Property, Parameter };

inline const char* decl_kind_name(DeclKind k) {
  switch (k) {
    case DeclKind::Function: return "def";
    case DeclKind::Network: return "network";
    case DeclKind::Property: return "property";
    case DeclKind::Parameter: return "parameter";
  }
  return "?";
}

/// Top-level declaration. `type` and `body` are stored closed relative to the
/// declarations that precede it: at local binder depth d inside declaration i,
/// Var k with k < d is a local binder and Var (d + j) refers to declaration
/// i - 1 - j. `origin` names the source declaration a monomorphised copy came
/// from (equal to `name` everywhere else).
template <class B>
struct Decl {
  DeclKind kind;
  std::string name;
  std::optional<Expr<B>> type;
  std::optional<Expr<B>> body;
  std::string origin;
  Span span = {};
};

/// Type alias remembered from the surface language. Aliases are inlined
/// during scope resolution; backends reuse the names for tensor shapes.
struct TensorAlias {
  std::string name;
  std::vector<std::uint64_t> dims;
};

template <class B>
struct Spec {
  std::vector<Decl<B>> decls;
  std::vector<TensorAlias> aliases;
};

inline const char* binder_mode_open(BinderMode m) {
  switch (m) {
    case BinderMode::Explicit: return "(";
    case BinderMode::Implicit: return "{";
    case BinderMode::Instance: return "{{";
  }
  return "(";
}

inline const char* binder_mode_close(BinderMode m) {
  switch (m) {
    case BinderMode::Explicit: return ")";
    case BinderMode::Implicit: return "}";
    case BinderMode::Instance: return "}}";
  }
  return ")";
}

}  // namespace vspec::core
