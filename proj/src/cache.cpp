#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vspec/cache/cache.hpp"
#include "vspec/diagnostics.hpp"
#include "vspec/hash.hpp"

namespace vspec::cache {
namespace {

bool is_hex_digest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

bool has_space(std::string_view s) {
  return s.find_first_of(" \t\n\r") != std::string_view::npos;
}

std::string fraction(const Rational& r) {
  return r.numerator_str() + "/" + r.denominator_str();
}

std::string property_value(const PropertyStatus& p) {
  switch (p.state) {
    case PropertyStatus::State::Verified:
      return "verified " + p.solver + " " + p.timestamp;
    case PropertyStatus::State::Failed: return "failed";
    case PropertyStatus::State::Unknown: return "unknown";
  }
  return "unknown";
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::IntegrityFailure, "manifest is malformed: " + why);
}

}  // namespace

std::string serialize(const CacheManifest& m) {
  std::vector<std::string> lines;
  for (const auto& [name, e] : m.networks) {
    lines.push_back("network." + name + ".hash\t" + e.content_hash);
    lines.push_back("network." + name + ".path\t" + e.path);
  }
  for (const auto& [name, r] : m.parameters)
    lines.push_back("parameter." + name + "\t" + fraction(r));
  for (const auto& [name, p] : m.properties)
    lines.push_back("property." + name + "\t" + property_value(p));
  lines.push_back("spec_source_hash\t" + m.spec_source_hash);
  lines.push_back("version\t" + m.version);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

CacheManifest parse_manifest(std::string_view text) {
  CacheManifest m;
  m.version.clear();
  bool saw_spec_hash = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) malformed("missing final newline");
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) malformed("blank line");
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) malformed("line without a tab");
    std::string key(line.substr(0, tab));
    std::string value(line.substr(tab + 1));

    if (key == "version") {
      if (value != "1") malformed("unsupported version '" + value + "'");
      m.version = value;
    } else if (key == "spec_source_hash") {
      if (!is_hex_digest(value)) malformed("bad spec hash");
      m.spec_source_hash = value;
      saw_spec_hash = true;
    } else if (key.rfind("network.", 0) == 0) {
      std::string rest = key.substr(8);
      std::size_t dot = rest.rfind('.');
      if (dot == std::string::npos) malformed("bad network key");
      std::string name = rest.substr(0, dot);
      std::string field = rest.substr(dot + 1);
      if (name.empty()) malformed("empty network name");
      if (field == "hash") {
        if (!is_hex_digest(value)) malformed("bad network hash");
        m.networks[name].content_hash = value;
      } else if (field == "path") {
        m.networks[name].path = value;
      } else {
        malformed("unknown network field '" + field + "'");
      }
    } else if (key.rfind("parameter.", 0) == 0) {
      std::string name = key.substr(10);
      if (name.empty()) malformed("empty parameter name");
      auto r = Rational::parse(value);
      if (!r) malformed("bad rational '" + value + "'");
      m.parameters[name] = *r;
    } else if (key.rfind("property.", 0) == 0) {
      std::string name = key.substr(9);
      if (name.empty()) malformed("empty property name");
      std::istringstream vs(value);
      std::string word;
      vs >> word;
      PropertyStatus st;
      if (word == "verified") {
        st.state = PropertyStatus::State::Verified;
        if (!(vs >> st.solver) || !(vs >> st.timestamp))
          malformed("verified entry needs a solver and a timestamp");
      } else if (word == "failed") {
        st.state = PropertyStatus::State::Failed;
      } else if (word == "unknown") {
        st.state = PropertyStatus::State::Unknown;
      } else {
        malformed("unknown property status '" + word + "'");
      }
      std::string extra;
      if (vs >> extra) malformed("trailing data in property entry");
      m.properties[name] = st;
    } else {
      malformed("unknown key '" + key + "'");
    }
  }
  if (m.version.empty()) malformed("missing version");
  if (!saw_spec_hash) malformed("missing spec_source_hash");
  for (const auto& [name, e] : m.networks) {
    if (e.path.empty()) malformed("network '" + name + "' has no path");
    if (e.content_hash.empty()) malformed("network '" + name + "' has no hash");
  }
  return m;
}

FileReader disk_reader() {
  return [](const std::string& path) -> std::optional<std::string> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return ss.str();
  };
}

CacheManifest record_verification(
    const core::Spec<core::StandardBuiltin>& spec, std::string_view spec_source,
    const std::map<std::string, std::string>& network_paths,
    const std::map<std::string, Rational>& parameter_values,
    const std::map<std::string, PropertyStatus>& results,
    const std::string& dir, const FileReader& fs) {
  CacheManifest m;
  m.spec_source_hash = sha256_hex(spec_source);

  for (const core::Decl<core::StandardBuiltin>& d : spec.decls) {
    switch (d.kind) {
      case core::DeclKind::Network: {
        auto it = network_paths.find(d.name);
        if (it == network_paths.end())
          throw Error(ErrorCode::MissingNetworkBinding,
                      "no file bound for network '" + d.name + "'", d.span);
        if (has_space(it->second) ||
            it->second.find('\n') != std::string::npos)
          throw Error(ErrorCode::UsageError,
                      "network path may not contain whitespace: '" +
                          it->second + "'");
        auto bytes = fs(it->second);
        if (!bytes)
          throw Error(ErrorCode::IoError,
                      "cannot read network file '" + it->second + "'");
        m.networks[d.name] = NetworkEntry{it->second, sha256_hex(*bytes)};
        break;
      }
      case core::DeclKind::Parameter: {
        auto it = parameter_values.find(d.name);
        if (it == parameter_values.end())
          throw Error(ErrorCode::MissingParameter,
                      "no value supplied for parameter '" + d.name + "'",
                      d.span);
        m.parameters[d.name] = it->second;
        break;
      }
      case core::DeclKind::Property: {
        auto it = results.find(d.name);
        PropertyStatus st =
            it == results.end() ? PropertyStatus{} : it->second;
        if (st.state == PropertyStatus::State::Verified &&
            (st.solver.empty() || st.timestamp.empty() ||
             has_space(st.solver) || has_space(st.timestamp)))
          throw Error(ErrorCode::UsageError,
                      "verified status for '" + d.name +
                          "' needs a whitespace-free solver id and timestamp");
        m.properties[d.name] = st;
        break;
      }
      case core::DeclKind::Function: break;
    }
  }

  for (const auto& [name, _] : network_paths)
    if (!m.networks.count(name))
      throw Error(ErrorCode::UsageError,
                  "spec declares no network named '" + name + "'");
  for (const auto& [name, _] : parameter_values)
    if (!m.parameters.count(name))
      throw Error(ErrorCode::UsageError,
                  "spec declares no parameter named '" + name + "'");
  for (const auto& [name, _] : results)
    if (!m.properties.count(name))
      throw Error(ErrorCode::UsageError,
                  "spec declares no property named '" + name + "'");

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot create cache directory '" + dir + "': " + ec.message());
  const std::string path = dir + "/manifest";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::IoError, "cannot write manifest '" + path + "'");
  out << serialize(m);
  out.flush();
  if (!out)
    throw Error(ErrorCode::IoError, "cannot write manifest '" + path + "'");
  return m;
}

std::string IntegrityReport::describe() const {
  std::string s;
  for (const IntegrityItem& it : items) {
    switch (it.state) {
      case IntegrityItem::State::Ok:
        s += it.name.empty() ? "spec: ok" : "network " + it.name + ": ok";
        break;
      case IntegrityItem::State::SpecChanged:
        s += "spec: changed since verification (SpecChanged)";
        break;
      case IntegrityItem::State::NetworkChanged:
        s += "network " + it.name + ": changed since verification (NetworkChanged)";
        break;
      case IntegrityItem::State::NetworkMissing:
        s += "network " + it.name + ": file missing (NetworkMissing)";
        break;
    }
    s += '\n';
  }
  return s;
}

IntegrityReport check_integrity(const CacheManifest& m,
                                std::string_view spec_source,
                                const FileReader& fs) {
  IntegrityReport rep;
  rep.items.push_back(
      IntegrityItem{sha256_hex(spec_source) == m.spec_source_hash
                        ? IntegrityItem::State::Ok
                        : IntegrityItem::State::SpecChanged,
                    ""});
  for (const auto& [name, e] : m.networks) {
    auto bytes = fs(e.path);
    if (!bytes) {
      rep.items.push_back(IntegrityItem{IntegrityItem::State::NetworkMissing, name});
      continue;
    }
    rep.items.push_back(
        IntegrityItem{sha256_hex(*bytes) == e.content_hash
                          ? IntegrityItem::State::Ok
                          : IntegrityItem::State::NetworkChanged,
                      name});
  }
  return rep;
}

CacheManifest load_manifest(const std::string& dir, const FileReader& fs) {
  const std::string path = dir + "/manifest";
  auto bytes = fs(path);
  if (!bytes)
    throw Error(ErrorCode::MissingCache,
                "no verification cache at '" + path + "'");
  return parse_manifest(*bytes);
}

}  // namespace vspec::cache
