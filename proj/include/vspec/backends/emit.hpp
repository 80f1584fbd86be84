#pragma once

#include <map>
#include <optional>
#include <string>

#include "vspec/itp_ir/builtins.hpp"

namespace vspec::backends {

struct EmitTarget {
  enum class Kind { Agda, Rocq, Isabelle, Imandra };
  Kind kind;
  /// Rocq only: render real literals through the constructive rationals
  /// instead of the analysis interface reals.
  bool constructive_reals = false;
};

std::optional<EmitTarget::Kind> parse_target_name(const std::string& name);
const char* target_name(EmitTarget::Kind k);
const char* file_extension(EmitTarget::Kind k);

/// Per-export facts every emitter needs: the module/theory name (the
/// output file stem) and the sha256 of the specification source, which
/// goes into the generated-by header.
struct EmitInfo {
  std::string module_name;
  std::string spec_hash;
};

/// What the Agda backend knows about the verification cache: the cache
/// path embedded in checkVehicleProperty calls and the recorded model
/// path per network. Absent entirely when exporting without a cache.
struct AgdaCacheRef {
  std::string cache_path;
  std::map<std::string, std::string> network_paths;
};

std::string emit_agda(const itp_ir::IrSpec& spec, const EmitInfo& info,
                      const std::optional<AgdaCacheRef>& cache);
std::string emit_rocq(const itp_ir::IrSpec& spec, const EmitInfo& info,
                      bool constructive_reals);
std::string emit_isabelle(const itp_ir::IrSpec& spec, const EmitInfo& info);
std::string emit_imandra(const itp_ir::IrSpec& spec, const EmitInfo& info);

/// Dispatch on target. `cache` is consulted by the Agda backend only.
std::string emit(const EmitTarget& target, const itp_ir::IrSpec& spec,
                 const EmitInfo& info, const std::optional<AgdaCacheRef>& cache);

}  // namespace vspec::backends
