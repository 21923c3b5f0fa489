#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/bvm.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/iteration.hpp"
#include "forcing/morphisms.hpp"
#include "forcing/poset.hpp"
#include "forcing/semigen.hpp"
#include "forcing/two_step.hpp"

namespace forcing {

inline constexpr int kWorkspaceVersion = 1;
inline constexpr int kReportVersion = 1;

const std::vector<std::string>& known_commands();

// An iteration system declared in a workspace: a finite system, or the
// gallery tower F0 (built at the audit depth).
struct SystemDecl {
  std::optional<FiniteSystem> finite;
  bool gallery = false;
};

// One entry of the "audits" list. Which fields are used depends on the
// command; every name in it resolved when the workspace was loaded.
struct AuditRequest {
  std::string command;
  std::string target;
  std::optional<std::size_t> depth;
  // bvm-audit
  std::string algebra;
  std::vector<std::string> pool;
  std::optional<std::size_t> standard_rank;
  std::vector<std::string> formulas;
  // bvm-audit (Delta_1 transfer) and sg-audit (sp identity)
  std::string hom;
  std::string source_trace;
};

// Declarations keep their file order; every object passed its constructor's
// validation.
struct Workspace {
  template <class T>
  using Decls = std::vector<std::pair<std::string, T>>;

  Decls<FiniteCBA> algebras;
  Decls<Poset> posets;
  Decls<CompleteHom> homs;
  Decls<BName> names;
  Decls<Formula> formulas;
  Decls<AtomwisePresentation> presentations;
  Decls<SystemDecl> systems;
  Decls<ModelTrace> traces;
  std::vector<AuditRequest> audits;

  std::size_t object_count() const;
};

// Throws SyntaxError (with line and column), UnresolvedReference or
// ValidationError naming the offending object.
Workspace parse_workspace(std::string_view text);
Workspace load_workspace(const std::string& path);

struct ExecOptions {
  std::string command = "verify-all";
  std::uint64_t seed = 0;
  std::optional<std::size_t> depth;  // overrides request depths
  std::size_t exhaustive_max_atoms = 4;
};

struct ReportEntry {
  std::size_t request = 0;
  std::string command;
  std::string target;
  std::optional<std::size_t> depth;
  AuditResult result;
  std::string error_kind;  // set when the audit threw
  std::string error_detail;
  double seconds = 0;

  std::string verdict() const;  // PASS, FAIL or ERROR
};

struct AuditReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<ReportEntry> entries;

  bool passed() const;
};

// Runs the requests with the given command (all of them for verify-all).
// When the workspace declares none, the command runs on every object of its
// kind. Independent requests run concurrently; entries keep request order.
// Throws UnknownCommand.
AuditReport execute(const Workspace& ws, const ExecOptions& options);

enum class ReportFormat { Human, Json };

std::string emit_report(const AuditReport& r, ReportFormat format, bool timings = false);
// Inverse of the JSON format. Throws SyntaxError or ValidationError.
AuditReport parse_report(std::string_view text);

struct CliOptions {
  std::string workspace;
  ExecOptions exec;
  ReportFormat format = ReportFormat::Human;
  bool timings = false;
};

// Exit status: 0 all PASS, 1 any FAIL, 2 usage or parse error.
int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace forcing
