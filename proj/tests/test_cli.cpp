#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "forcing/cli.hpp"
#include "forcing/errors.hpp"

using namespace forcing;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ValidationError;
}

std::string shipped(const std::string& name) { return std::string(FORCING_SOURCE_DIR) + "/workspaces/" + name; }

std::string doc(const std::string& body) {
  return "{\"format\": \"forcing-workspace\", \"version\": 1" + (body.empty() ? "" : ", " + body) + "}";
}

const char* kOffTrace = R"("algebras": {"B2": {"atoms": 2}, "B4": {"atoms": 4}},
  "homs": {"i": {"source": "B2", "target": "B4", "fiber_map": [0, 0, 1, 1]}},
  "traces": {
    "MB": {"algebra": "B2", "carrier": ["{}", "{0}", "{0,1}"], "antichains": [["{0}", "{1}"]], "kappa": 2},
    "MC": {"algebra": "B4", "carrier": ["{}", "{2,3}", "{0,1,2,3}"], "antichains": [["{0,1}", "{2,3}"]], "kappa": 2}
  },
  "audits": [{"command": "sg-audit", "target": "MC", "hom": "i", "source": "MB"}])";

}  // namespace

TEST_CASE("parsing workspaces") {
  const Workspace one = parse_workspace(doc(R"("algebras": {"B2": {"atoms": 2}})"));
  CHECK(one.object_count() == 1);
  CHECK(parse_workspace(doc("")).object_count() == 0);

  CHECK(kind_of([] {
          parse_workspace(doc(R"("algebras": {"B2": {"atoms": 2}, "B4": {"atoms": 4}},
                                 "homs": {"i": {"source": "B2", "target": "B4", "fiber_map": [0, 1]}})"));
        }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_workspace(doc(R"("homs": {"i": {"source": "B2", "target": "B4", "fiber_map": []}})")); }) ==
        ErrorKind::UnresolvedReference);
  CHECK(kind_of([] { parse_workspace("{\"format\": \"forcing-workspace\", \"version\": 2}"); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_workspace(doc(R"("algebra": {})")); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_workspace(doc(R"("audits": [{"command": "bogus"}])")); }) == ErrorKind::ValidationError);

  try {
    parse_workspace("{\n  \"format\": \"forcing-workspace\",\n  \"version\": 1,\n  \"algebras\": {\"B\": {\"atoms\": }}\n}");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(std::string(e.what()).find("line 4, column") != std::string::npos);
  }
}

TEST_CASE("the shipped gallery workspace is the F0 request") {
  const Workspace ws = load_workspace(shipped("gallery.json"));
  REQUIRE(ws.audits.size() == 1);
  CHECK(ws.audits[0].command == "gallery");
  CHECK(ws.audits[0].depth == 16);
  REQUIRE(ws.systems.size() == 1);
  CHECK(ws.systems[0].second.gallery);

  const AuditReport r = execute(ws, {"gallery", 0, std::nullopt, 4});
  REQUIRE(r.entries.size() == 2);
  CHECK(r.passed());
  CHECK(r.entries[0].result.audit == "xlemma1");
  CHECK(r.entries[1].result.audit == "xwedge");
  CHECK(r.entries[0].depth == 16);
}

TEST_CASE("commands") {
  const Workspace ws = load_workspace(shipped("embedding_2_4.json"));
  const AuditReport r = execute(ws, {"retraction-laws", 0, std::nullopt, 4});
  REQUIRE(r.entries.size() == 1);
  CHECK(r.passed());
  CHECK(r.entries[0].result.facts.at("mode") == "exhaustive");
  const AuditReport sampled = execute(ws, {"retraction-laws", 0, std::nullopt, 3});
  CHECK(sampled.entries[0].result.facts.at("mode") == "sampled");

  CHECK(kind_of([&] { execute(ws, {"frobnicate", 0, std::nullopt, 4}); }) == ErrorKind::UnknownCommand);
  CHECK(execute(ws, {"verify-all", 0, std::nullopt, 4}).entries.empty());
  CHECK(execute(ws, {"twostep-iso", 0, std::nullopt, 4}).passed());

  const AuditReport off = execute(parse_workspace(doc(kOffTrace)), {"sg-audit", 0, std::nullopt, 4});
  CHECK_FALSE(off.passed());
}

TEST_CASE("reports") {
  AuditReport empty;
  empty.command = "verify-all";
  const std::string header = emit_report(empty, ReportFormat::Human);
  CHECK(header == "forcing-workbench report v1: command verify-all, seed 0\n");

  const AuditReport off = execute(parse_workspace(doc(kOffTrace)), {"sg-audit", 0, std::nullopt, 4});
  const std::string human = emit_report(off, ReportFormat::Human);
  CHECK(human.find("FAIL sg-audit MC [sp-identity]") != std::string::npos);
  CHECK(human.find("pi(c & sg(C, M)) = pi(c) & sg(B, M): {2,3}") != std::string::npos);

  const Workspace ws = load_workspace(shipped("verify_all.json"));
  const AuditReport r = execute(ws, {"verify-all", 7, std::nullopt, 4});
  const std::string json = emit_report(r, ReportFormat::Json);
  CHECK(emit_report(parse_report(json), ReportFormat::Json) == json);
  CHECK(emit_report(parse_report(emit_report(off, ReportFormat::Json)), ReportFormat::Json) ==
        emit_report(off, ReportFormat::Json));
  CHECK(json.find("\"seconds\"") == std::string::npos);
  CHECK(emit_report(r, ReportFormat::Json, true).find("\"seconds\"") != std::string::npos);
  CHECK(kind_of([] { parse_report("{\"schema\": \"forcing-report\", \"version\": 9}"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_report("{"); }) == ErrorKind::SyntaxError);

  // Same workspace, command, seed and depth: the same bytes.
  CHECK(emit_report(execute(ws, {"verify-all", 7, std::nullopt, 4}), ReportFormat::Json) == json);
}

TEST_CASE("exit status") {
  std::ostringstream out, err;
  CliOptions o;
  o.workspace = shipped("gallery.json");
  o.exec.command = "gallery";
  o.format = ReportFormat::Json;
  CHECK(run_cli(o, out, err) == 0);
  o.exec.command = "nope";
  CHECK(run_cli(o, out, err) == 2);
  CHECK(err.str().find("UnknownCommand") != std::string::npos);
  o.workspace = shipped("missing.json");
  o.exec.command = "gallery";
  CHECK(run_cli(o, out, err) == 2);
}
