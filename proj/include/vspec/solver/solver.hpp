#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vspec/rational.hpp"

namespace vspec::solver {

struct PropertyResult {
  enum class Outcome { Verified, Falsified, Unknown };
  Outcome outcome = Outcome::Unknown;
  // Flattened (row-major) input tensor witnessing the failure.
  std::vector<Rational> counterexample;
  bool operator==(const PropertyResult&) const = default;
};

struct SolverResult {
  std::string solver_id;
  std::map<std::string, PropertyResult> properties;
};

/// One property the solver is asked about. When the property is a single
/// quantifier over a tensor, `input_shape` carries the quantified shape so a
/// claimed counterexample can be checked for size.
struct PropertyQuery {
  std::string name;
  std::optional<std::vector<std::uint64_t>> input_shape;
};

/// Reads a mock status table (`property<TAB>status` per line, status one of
/// `verified`, `unknown`, `falsified:<rationals comma-separated>`) and
/// returns the queried properties' entries unchanged. Every queried
/// property must appear in the table.
SolverResult run_mock_solver(std::string_view table,
                             const std::vector<PropertyQuery>& props);

/// Invokes `command <spec_path> <name>:<path>...` and parses the same
/// status table from its standard output. A non-zero exit is a solver
/// failure, reported with the exit code and a stderr excerpt.
SolverResult run_external_solver(
    const std::string& command, const std::string& solver_id,
    const std::string& spec_path,
    const std::map<std::string, std::string>& network_paths,
    const std::vector<PropertyQuery>& props);

}  // namespace vspec::solver
