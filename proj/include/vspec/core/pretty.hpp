#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "vspec/core/expr.hpp"

namespace vspec::core {

/// Plain-text rendering of core terms for diagnostics and tests. Binders
/// keep their source hint when it does not shadow an enclosing name;
/// otherwise they get fresh names x0, x1, ... by depth. Requires a free
/// function `builtin_name(const B&)` for the alphabet.
template <class B>
class Pretty {
 public:
  explicit Pretty(const std::vector<std::string>* decl_names = nullptr)
      : decl_names_(decl_names) {}

  std::string render(const Expr<B>& e) {
    std::ostringstream os;
    go(os, e, /*prec=*/0);
    return os.str();
  }

 private:
  using E = Expr<B>;

  std::string fresh_binder(const std::string& hint) {
    std::string name = hint;
    if (name.empty() || name == "_" ||
        std::find(scope_.begin(), scope_.end(), name) != scope_.end())
      name = "x" + std::to_string(scope_.size());
    return name;
  }

  std::string var_name(std::uint32_t index) {
    if (index < scope_.size()) return scope_[scope_.size() - 1 - index];
    if (decl_names_) {
      std::uint32_t decl_back = index - static_cast<std::uint32_t>(scope_.size());
      if (decl_back < decl_names_->size())
        return (*decl_names_)[decl_names_->size() - 1 - decl_back];
    }
    return "#" + std::to_string(index);
  }

  // Precedence: 0 lambda/pi body, 1 arrow, 2 application, 3 atom.
  void go(std::ostringstream& os, const Expr<B>& e, int prec) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, typename E::Universe>) {
            os << "Type";
          } else if constexpr (std::is_same_v<T, typename E::Var>) {
            os << var_name(n.index);
          } else if constexpr (std::is_same_v<T, typename E::Builtin>) {
            os << builtin_name(n.value);
          } else if constexpr (std::is_same_v<T, typename E::Meta>) {
            os << "?" << n.id;
          } else if constexpr (std::is_same_v<T, typename E::InstanceMeta>) {
            os << "?i" << n.id;
          } else if constexpr (std::is_same_v<T, typename E::App>) {
            if (prec > 2) os << "(";
            go(os, n.fn, 2);
            os << " ";
            if (n.mode != BinderMode::Explicit) {
              os << binder_mode_open(n.mode);
              go(os, n.arg, 0);
              os << binder_mode_close(n.mode);
            } else {
              go(os, n.arg, 3);
            }
            if (prec > 2) os << ")";
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            if (prec > 1) os << "(";
            bool dependent = uses_var0(n.codomain);
            std::string name = fresh_binder(n.binder);
            if (dependent || n.mode != BinderMode::Explicit) {
              os << binder_mode_open(n.mode) << name << " : ";
              go(os, n.domain, 0);
              os << binder_mode_close(n.mode) << " -> ";
            } else {
              go(os, n.domain, 2);
              os << " -> ";
            }
            scope_.push_back(name);
            go(os, n.codomain, 1);
            scope_.pop_back();
            if (prec > 1) os << ")";
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            if (prec > 0) os << "(";
            std::string name = fresh_binder(n.binder);
            os << "\\";
            if (n.mode != BinderMode::Explicit)
              os << binder_mode_open(n.mode) << name << binder_mode_close(n.mode);
            else
              os << name;
            os << " -> ";
            scope_.push_back(name);
            go(os, n.body, 0);
            scope_.pop_back();
            if (prec > 0) os << ")";
          }
        },
        e.node());
  }

  static bool uses_var0(const Expr<B>& e, std::uint32_t depth = 0) {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, typename E::Var>) {
            return n.index == depth;
          } else if constexpr (std::is_same_v<T, typename E::Pi>) {
            return uses_var0(n.domain, depth) || uses_var0(n.codomain, depth + 1);
          } else if constexpr (std::is_same_v<T, typename E::Lam>) {
            if (n.annotation && uses_var0(*n.annotation, depth)) return true;
            return uses_var0(n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, typename E::App>) {
            return uses_var0(n.fn, depth) || uses_var0(n.arg, depth);
          } else {
            return false;
          }
        },
        e.node());
  }

  std::vector<std::string> scope_;
  const std::vector<std::string>* decl_names_;
};

template <class B>
std::string pretty(const Expr<B>& e) {
  return Pretty<B>().render(e);
}

template <class B>
std::string pretty_in(const Spec<B>& spec, const Expr<B>& e) {
  std::vector<std::string> names;
  names.reserve(spec.decls.size());
  for (const auto& d : spec.decls) names.push_back(d.name);
  return Pretty<B>(&names).render(e);
}

template <class B>
std::string pretty_spec(const Spec<B>& spec) {
  std::ostringstream os;
  std::vector<std::string> names;
  for (const auto& d : spec.decls) {
    Pretty<B> p(&names);
    os << decl_kind_name(d.kind) << " " << d.name;
    if (d.type) os << " : " << Pretty<B>(&names).render(*d.type);
    if (d.body) os << "\n  " << d.name << " = " << Pretty<B>(&names).render(*d.body);
    os << "\n";
    names.push_back(d.name);
  }
  return os.str();
}

}  // namespace vspec::core
