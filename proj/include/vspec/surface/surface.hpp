#pragma once

#include <string>
#include <string_view>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/surface/ast.hpp"

namespace vspec::surface {

/// Parses a whole `.vcl` file. Layout rule: a token in column 1 starts a new
/// declaration item, so continuation lines of a multi-line expression must be
/// indented; `;` separates items sharing a line.
SurfaceSpec parse_spec(std::string_view source);

std::string pretty_type(const SurfaceType& t);
std::string pretty_expr(const SurfaceExpr& e);

/// Source form that re-parses to a structurally identical tree.
std::string pretty_spec(const SurfaceSpec& spec);

bool expr_equal(const SurfaceExpr& a, const SurfaceExpr& b);
bool spec_equal(const SurfaceSpec& a, const SurfaceSpec& b);

/// Scope resolution and lowering onto the core calculus: names become de
/// Bruijn indices, aliases are inlined (tensor aliases are remembered in
/// Spec::aliases), chains/let/vectors become their builtin spellings, and
/// decimal literals become scalar tensor constants.
core::Spec<core::StandardBuiltin> desugar(const SurfaceSpec& spec);

}  // namespace vspec::surface
