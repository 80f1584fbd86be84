#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vspec/diagnostics.hpp"
#include "vspec/solver/solver.hpp"

#include <sys/wait.h>

namespace vspec::solver {
namespace {

Rational parse_num(std::string tok) {
  const std::size_t a = tok.find_first_not_of(" \t");
  const std::size_t b = tok.find_last_not_of(" \t");
  if (a == std::string::npos)
    throw Error(ErrorCode::SolverFailure, "empty number in a counterexample");
  tok = tok.substr(a, b - a + 1);
  std::optional<Rational> r = tok.find('.') != std::string::npos
                                  ? Rational::parse_decimal(tok)
                                  : Rational::parse(tok);
  if (!r)
    throw Error(ErrorCode::SolverFailure,
                "'" + tok + "' is not a number in a solver status line");
  return *r;
}

std::map<std::string, PropertyResult> parse_table(std::string_view text) {
  std::map<std::string, PropertyResult> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::SolverFailure,
                  "solver status line without a tab: '" + std::string(line) + "'");
    std::string name(line.substr(0, tab));
    std::string status(line.substr(tab + 1));
    PropertyResult r;
    if (status == "verified") {
      r.outcome = PropertyResult::Outcome::Verified;
    } else if (status == "unknown") {
      r.outcome = PropertyResult::Outcome::Unknown;
    } else if (status.rfind("falsified:", 0) == 0) {
      r.outcome = PropertyResult::Outcome::Falsified;
      std::string rest = status.substr(10);
      std::size_t at = 0;
      while (at <= rest.size()) {
        std::size_t comma = rest.find(',', at);
        std::string tok = comma == std::string::npos
                              ? rest.substr(at)
                              : rest.substr(at, comma - at);
        r.counterexample.push_back(parse_num(tok));
        if (comma == std::string::npos) break;
        at = comma + 1;
      }
    } else {
      throw Error(ErrorCode::SolverFailure,
                  "unknown solver status '" + status + "' for property '" +
                      name + "'");
    }
    out[name] = std::move(r);
  }
  return out;
}

SolverResult select_and_validate(std::map<std::string, PropertyResult> table,
                                 const std::vector<PropertyQuery>& props,
                                 std::string solver_id) {
  SolverResult res;
  res.solver_id = std::move(solver_id);
  for (const PropertyQuery& q : props) {
    auto it = table.find(q.name);
    if (it == table.end())
      throw Error(ErrorCode::MockFileMissingProperty,
                  "solver output has no status for property '" + q.name + "'");
    const PropertyResult& r = it->second;
    if (r.outcome == PropertyResult::Outcome::Falsified && q.input_shape) {
      std::size_t n = 1;
      for (std::uint64_t d : *q.input_shape) n *= d;
      if (r.counterexample.size() != n)
        throw Error(ErrorCode::ShapeMismatch,
                    "counterexample for '" + q.name + "' has " +
                        std::to_string(r.counterexample.size()) +
                        " values but the quantified tensor has " +
                        std::to_string(n));
    }
    res.properties[q.name] = r;
  }
  return res;
}

}  // namespace

SolverResult run_mock_solver(std::string_view table,
                             const std::vector<PropertyQuery>& props) {
  return select_and_validate(parse_table(table), props, "mock");
}

SolverResult run_external_solver(
    const std::string& command, const std::string& solver_id,
    const std::string& spec_path,
    const std::map<std::string, std::string>& network_paths,
    const std::vector<PropertyQuery>& props) {
  auto quote = [](const std::string& s) {
    std::string q = "'";
    for (char c : s) {
      if (c == '\'') q += "'\\''";
      else q.push_back(c);
    }
    q += "'";
    return q;
  };

  std::string stderr_path =
      (std::filesystem::temp_directory_path() /
       ("vspec-solver-" + std::to_string(::getpid()) + ".err"))
          .string();
  std::string cmd = command + " " + quote(spec_path);
  for (const auto& [name, path] : network_paths)
    cmd += " " + quote(name + ":" + path);
  cmd += " 2>" + quote(stderr_path);

  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe)
    throw Error(ErrorCode::SolverFailure,
                "cannot start solver command: " + command);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int rc = ::pclose(pipe);

  std::string err;
  {
    std::ifstream es(stderr_path, std::ios::binary);
    std::ostringstream ss;
    ss << es.rdbuf();
    err = ss.str();
    std::error_code ec;
    std::filesystem::remove(stderr_path, ec);
  }

  if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
    int code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    if (err.size() > 300) err = err.substr(0, 300) + "...";
    throw Error(ErrorCode::SolverFailure,
                "solver command failed with exit code " + std::to_string(code) +
                    (err.empty() ? "" : (": " + err)));
  }
  return select_and_validate(parse_table(out), props, solver_id);
}

}  // namespace vspec::solver
