#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vspec/core/builtins.hpp"
#include "vspec/core/expr.hpp"
#include "vspec/rational.hpp"

namespace vspec::cache {

/// Outcome stored per property. Verified entries carry the solver that
/// produced them and a timestamp; neither may contain whitespace, since the
/// manifest is line and space delimited.
struct PropertyStatus {
  enum class State { Verified, Failed, Unknown };
  State state = State::Unknown;
  std::string solver;
  std::string timestamp;
  bool operator==(const PropertyStatus&) const = default;
};

struct NetworkEntry {
  std::string path;
  std::string content_hash;  // sha-256, lowercase hex
  bool operator==(const NetworkEntry&) const = default;
};

/// Everything a later export needs to re-check that the verification still
/// applies: the spec bytes, every network file, and the parameter valuation
/// are pinned by content.
struct CacheManifest {
  std::string version = "1";
  std::string spec_source_hash;
  std::map<std::string, NetworkEntry> networks;
  std::map<std::string, Rational> parameters;
  std::map<std::string, PropertyStatus> properties;
  bool operator==(const CacheManifest&) const = default;
};

/// Canonical text form: one `key<TAB>value` line per entry, keys sorted
/// bytewise, UTF-8, `\n` endings. Byte-stable for golden tests.
std::string serialize(const CacheManifest& m);

/// Inverse of serialize. Unknown or malformed lines are integrity failures:
/// a manifest is trusted input only when it parses canonically.
CacheManifest parse_manifest(std::string_view text);

/// Reads a file's bytes, or nullopt when the file cannot be read.
using FileReader =
    std::function<std::optional<std::string>(const std::string& path)>;

FileReader disk_reader();

/// Builds the manifest for a verification run and writes it to
/// `dir/manifest`. Names are taken from the spec's declarations, so the
/// manifest can never mention a network or parameter the spec lacks.
CacheManifest record_verification(
    const core::Spec<core::StandardBuiltin>& spec, std::string_view spec_source,
    const std::map<std::string, std::string>& network_paths,
    const std::map<std::string, Rational>& parameter_values,
    const std::map<std::string, PropertyStatus>& results,
    const std::string& dir, const FileReader& fs);

struct IntegrityItem {
  enum class State { Ok, SpecChanged, NetworkChanged, NetworkMissing };
  State state;
  std::string name;  // network name; empty for the spec entry
  bool operator==(const IntegrityItem&) const = default;
};

struct IntegrityReport {
  std::vector<IntegrityItem> items;
  bool all_ok() const {
    for (const IntegrityItem& it : items)
      if (it.state != IntegrityItem::State::Ok) return false;
    return true;
  }
  /// One line per finding, for diagnostics and the acceptance run.
  std::string describe() const;
};

/// Recomputes the spec and network hashes and reports every mismatch.
/// Findings are data, not errors; the caller decides to refuse.
IntegrityReport check_integrity(const CacheManifest& m,
                                std::string_view spec_source,
                                const FileReader& fs);

/// Loads `dir/manifest`. Missing file -> Error{MissingCache}; malformed ->
/// Error{IntegrityFailure}.
CacheManifest load_manifest(const std::string& dir, const FileReader& fs);

}  // namespace vspec::cache
