#include "forcing/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "forcing/errors.hpp"
#include "forcing/gallery.hpp"

namespace forcing {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kDefaultIterateDepth = 6;
constexpr std::size_t kDefaultGalleryDepth = 16;
constexpr std::size_t kCorrespondenceMaxAtoms = 6;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::SyntaxError, line_col(text, e.byte) + ": " + e.what());
  }
}

template <class T>
const T& lookup(const Workspace::Decls<T>& decls, const std::string& name, const char* section) {
  for (const auto& [k, v] : decls) {
    if (k == name) return v;
  }
  fail(ErrorKind::UnresolvedReference, std::string(section) + " '" + name + "'");
}

template <class T>
bool declared(const Workspace::Decls<T>& decls, const std::string& name) {
  return std::any_of(decls.begin(), decls.end(), [&](const auto& d) { return d.first == name; });
}

// Runs `f`, turning anything but an unresolved reference into a
// ValidationError that names the object.
template <class F>
auto validated(const std::string& object, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnresolvedReference) throw;
    fail(ErrorKind::ValidationError, object + ": " + to_string(e.kind()).data() + ": " + e.what());
  } catch (const Json::exception& e) {
    fail(ErrorKind::ValidationError, object + ": " + e.what());
  }
}

Element element_of(const FiniteCBA& alg, const Json& j) { return alg.parse(j.get<std::string>()); }

std::vector<Element> elements_of(const FiniteCBA& alg, const Json& j) {
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(element_of(alg, x));
  return out;
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(ErrorKind::ValidationError, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      fail(ErrorKind::ValidationError, "unexpected field '" + k + "'");
    }
  }
}

Poset poset_of(const Json& j) {
  require_keys(j, {"reversed_tree", "chain", "antichain", "labels", "below"});
  if (j.contains("reversed_tree")) return Poset::reversed_tree(j.at("reversed_tree").get<std::size_t>());
  if (j.contains("chain")) return Poset::chain(j.at("chain").get<std::size_t>());
  if (j.contains("antichain")) return Poset::antichain(j.at("antichain").get<std::size_t>());
  const auto labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<std::pair<std::size_t, std::size_t>> below;
  const auto index = [&](const std::string& l) {
    const auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) fail(ErrorKind::ValidationError, "unknown label '" + l + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  if (j.contains("below")) {
    for (const auto& pair : j.at("below")) {
      below.emplace_back(index(pair.at(0).get<std::string>()), index(pair.at(1).get<std::string>()));
    }
  }
  return Poset::from_relation(labels, below);
}

BName name_of(const Workspace& ws, const Json& j) {
  require_keys(j, {"algebra", "check", "entries"});
  const FiniteCBA& alg = lookup(ws.algebras, j.at("algebra").get<std::string>(), "algebra");
  const std::size_t n = alg.atom_count();
  if (j.contains("check")) return BName::check(HFSet::parse(j.at("check").get<std::string>()), n);
  std::vector<BName::Entry> entries;
  for (const auto& e : j.at("entries")) {
    require_keys(e, {"name", "check", "value"});
    BName child = e.contains("name") ? lookup(ws.names, e.at("name").get<std::string>(), "name")
                                     : BName::check(HFSet::parse(e.at("check").get<std::string>()), n);
    if (child.atoms() != n) fail(ErrorKind::ValidationError, "entry name lives over another algebra");
    entries.push_back({child, element_of(alg, e.at("value"))});
  }
  return BName::from_entries(n, std::move(entries));
}

SystemDecl system_of(const Workspace& ws, const Json& j) {
  require_keys(j, {"chain", "gallery", "algebras", "maps"});
  SystemDecl d;
  if (j.contains("gallery")) {
    d.gallery = j.at("gallery").get<bool>();
    if (!d.gallery) fail(ErrorKind::ValidationError, "gallery must be true when present");
    return d;
  }
  if (j.contains("chain")) {
    std::vector<CompleteHom> steps;
    for (const auto& h : j.at("chain")) steps.push_back(lookup(ws.homs, h.get<std::string>(), "hom"));
    d.finite = FiniteSystem::chain(steps);
    return d;
  }
  std::vector<FiniteCBA> algebras;
  for (const auto& a : j.at("algebras")) algebras.push_back(lookup(ws.algebras, a.get<std::string>(), "algebra"));
  std::vector<FiniteSystem::StageMap> maps;
  for (const auto& m : j.at("maps")) {
    require_keys(m, {"from", "to", "hom"});
    maps.push_back({m.at("from").get<std::size_t>(), m.at("to").get<std::size_t>(),
                    lookup(ws.homs, m.at("hom").get<std::string>(), "hom")});
  }
  d.finite = FiniteSystem::build(std::move(algebras), maps);
  return d;
}

ModelTrace trace_of(const Workspace& ws, const Json& j) {
  require_keys(j, {"random", "algebra", "carrier", "predense", "antichains", "kappa", "delta", "names"});
  if (j.contains("random")) {
    const Json& r = j.at("random");
    require_keys(r, {"atoms", "seed"});
    std::mt19937_64 rng(r.at("seed").get<std::uint64_t>());
    return random_model_trace(rng, r.at("atoms").get<std::size_t>());
  }
  ModelTrace t;
  t.algebra = lookup(ws.algebras, j.at("algebra").get<std::string>(), "algebra");
  t.carrier = elements_of(t.algebra, j.value("carrier", Json::array()));
  for (const auto& d : j.value("predense", Json::array())) t.designated_predense.push_back(elements_of(t.algebra, d));
  for (const auto& a : j.value("antichains", Json::array())) {
    t.designated_antichains.push_back(elements_of(t.algebra, a));
  }
  t.kappa = j.value("kappa", std::size_t{1});
  t.delta = j.value("delta", std::size_t{1});
  for (const auto& n : j.value("names", Json::array())) {
    require_keys(n, {"antichain", "labels"});
    t.ordinal_names.push_back({elements_of(t.algebra, n.at("antichain")), n.at("labels").get<std::vector<std::size_t>>()});
  }
  validate_trace(t);
  return t;
}

std::string require_string(const Json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::ValidationError, std::string("missing '") + key + "'");
  return j.at(key).get<std::string>();
}

AuditRequest request_of(const Workspace& ws, const Json& j) {
  require_keys(j, {"command", "target", "depth", "algebra", "pool", "standard_rank", "formulas", "hom", "source"});
  AuditRequest r;
  r.command = require_string(j, "command");
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), r.command) == cmds.end() || r.command == "verify-all") {
    fail(ErrorKind::ValidationError, "'" + r.command + "' is not an audit command");
  }
  if (j.contains("depth")) r.depth = j.at("depth").get<std::size_t>();
  if (r.command == "gallery") return r;
  if (r.command == "bvm-audit") {
    r.algebra = require_string(j, "algebra");
    const FiniteCBA& alg = lookup(ws.algebras, r.algebra, "algebra");
    if (j.contains("standard_rank")) r.standard_rank = j.at("standard_rank").get<std::size_t>();
    for (const auto& p : j.value("pool", Json::array())) {
      r.pool.push_back(p.get<std::string>());
      if (lookup(ws.names, r.pool.back(), "name").atoms() != alg.atom_count()) {
        fail(ErrorKind::ValidationError, "pool name '" + r.pool.back() + "' lives over another algebra");
      }
    }
    if (!r.standard_rank && r.pool.empty()) fail(ErrorKind::ValidationError, "bvm-audit needs a pool");
    for (const auto& f : j.at("formulas")) {
      r.formulas.push_back(f.get<std::string>());
      lookup(ws.formulas, r.formulas.back(), "formula");
    }
    if (j.contains("hom")) {
      r.hom = j.at("hom").get<std::string>();
      if (!(lookup(ws.homs, r.hom, "hom").source() == alg)) {
        fail(ErrorKind::ValidationError, "hom '" + r.hom + "' does not start at '" + r.algebra + "'");
      }
    }
    return r;
  }
  r.target = require_string(j, "target");
  if (r.command == "complete") {
    lookup(ws.posets, r.target, "poset");
  } else if (r.command == "retraction-laws") {
    lookup(ws.homs, r.target, "hom");
  } else if (r.command == "twostep-iso") {
    if (!declared(ws.presentations, r.target)) lookup(ws.homs, r.target, "hom or presentation");
  } else if (r.command == "iterate") {
    lookup(ws.systems, r.target, "system");
  } else if (r.command == "sg-audit") {
    lookup(ws.traces, r.target, "trace");
    if (j.contains("hom") != j.contains("source")) {
      fail(ErrorKind::ValidationError, "sg-audit takes 'hom' and 'source' together");
    }
    if (j.contains("hom")) {
      r.hom = j.at("hom").get<std::string>();
      r.source_trace = j.at("source").get<std::string>();
      lookup(ws.homs, r.hom, "hom");
      lookup(ws.traces, r.source_trace, "trace");
    }
  }
  return r;
}

template <class T, class F>
void section(const Json& doc, const char* key, Workspace::Decls<T>& into, const char* what, F&& make) {
  if (!doc.contains(key)) return;
  const Json& s = doc.at(key);
  if (!s.is_object()) fail(ErrorKind::ValidationError, std::string(key) + " must be an object");
  for (const auto& [name, spec] : s.items()) {
    if (declared(into, name)) fail(ErrorKind::ValidationError, std::string(what) + " '" + name + "' declared twice");
    into.emplace_back(name, validated(std::string(what) + " '" + name + "'", [&] { return make(spec); }));
  }
}

// ---- execution

struct Task {
  std::size_t index;
  AuditRequest request;
};

SamplingOptions sampling_for(const CompleteHom& h, const ExecOptions& o) {
  return SamplingOptions{h.target().atom_count() <= o.exhaustive_max_atoms, o.seed, 48};
}

std::size_t depth_for(const AuditRequest& r, const ExecOptions& o, std::size_t fallback) {
  if (o.depth) return *o.depth;
  return r.depth.value_or(fallback);
}

std::vector<AuditResult> run_request(const Workspace& ws, const AuditRequest& r, const ExecOptions& o,
                                     std::optional<std::size_t>& depth_used) {
  const std::string& c = r.command;
  if (c == "complete") {
    const Poset& p = lookup(ws.posets, r.target, "poset");
    const Completion comp = boolean_completion(p);
    AuditResult a = audit_completion(p, comp);
    a.facts["atoms"] = std::to_string(comp.algebra.atom_count());
    return {a, audit_dense_antichain_facts(p)};
  }
  if (c == "retraction-laws") {
    const CompleteHom& h = lookup(ws.homs, r.target, "hom");
    return {retraction_laws_audit(h, sampling_for(h, o))};
  }
  if (c == "twostep-iso") {
    if (declared(ws.presentations, r.target)) {
      const TwoStep t = build_two_step(lookup(ws.presentations, r.target, "presentation"));
      const SamplingOptions so = sampling_for(t.embedding(), o);
      return {two_step_audit(t, so), two_step_iso_audit(t.embedding(), so)};
    }
    const CompleteHom& h = lookup(ws.homs, r.target, "hom");
    return {two_step_iso_audit(h, sampling_for(h, o))};
  }
  if (c == "bvm-audit") {
    const FiniteCBA& alg = lookup(ws.algebras, r.algebra, "algebra");
    std::vector<BName> pool;
    if (r.standard_rank) pool = standard_pool(alg.atom_count(), *r.standard_rank);
    for (const auto& n : r.pool) pool.push_back(lookup(ws.names, n, "name"));
    std::vector<Formula> fs;
    for (const auto& f : r.formulas) fs.push_back(lookup(ws.formulas, f, "formula"));
    std::vector<AuditResult> out{forcing_audit(alg.atom_count(), pool, fs)};
    if (!r.hom.empty()) {
      std::vector<Formula> delta0;
      for (const auto& f : fs) {
        if (f.is_delta0()) delta0.push_back(f);
      }
      out.push_back(delta1_audit(lookup(ws.homs, r.hom, "hom"), pool, delta0));
    }
    return out;
  }
  if (c == "iterate") {
    const SystemDecl& s = lookup(ws.systems, r.target, "system");
    const std::size_t depth = depth_for(r, o, s.gallery ? kDefaultGalleryDepth : kDefaultIterateDepth);
    depth_used = depth;
    if (s.gallery) return {build_F0(std::max<std::size_t>(depth, 2)).audit};
    const FiniteSystem& f = *s.finite;
    std::vector<AuditResult> out{system_audit<Element>(f, depth, o.seed)};
    if (f.algebra(f.materialized() - 1).atom_count() <= kCorrespondenceMaxAtoms) {
      out.push_back(direct_limit_correspondence_audit(f));
    }
    if (f.materialized() >= 2) out.push_back(quotient_thread_audit(f, 0, o.seed));
    return out;
  }
  if (c == "sg-audit") {
    const ModelTrace& t = lookup(ws.traces, r.target, "trace");
    std::vector<AuditResult> out{sg_audit(t)};
    if (!r.hom.empty()) {
      out.push_back(sp_identity_audit(lookup(ws.homs, r.hom, "hom"), lookup(ws.traces, r.source_trace, "trace"), t));
    }
    return out;
  }
  if (c == "gallery") {
    const std::size_t depth = depth_for(r, o, kDefaultGalleryDepth);
    depth_used = depth;
    return {xlemma1_audit(depth), xwedge_audit(depth)};
  }
  fail(ErrorKind::UnknownCommand, c);
}

std::vector<ReportEntry> run_task(const Workspace& ws, const Task& task, const ExecOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const std::string target = task.request.target.empty() ? task.request.algebra : task.request.target;
  std::optional<std::size_t> depth;
  std::vector<ReportEntry> out;
  try {
    for (auto& result : run_request(ws, task.request, o, depth)) {
      ReportEntry e;
      e.request = task.index;
      e.command = task.request.command;
      e.target = target;
      e.result = std::move(result);
      out.push_back(std::move(e));
    }
  } catch (const Error& err) {
    ReportEntry e;
    e.request = task.index;
    e.command = task.request.command;
    e.target = target;
    e.result.audit = task.request.command;
    e.error_kind = to_string(err.kind());
    e.error_detail = target.empty() ? err.what() : target + ": " + err.what();
    out = {std::move(e)};
  }
  const double secs = elapsed();
  for (auto& e : out) {
    e.depth = depth;
    e.seconds = secs / static_cast<double>(out.size());
  }
  return out;
}

// Requests for a command the workspace does not list: one per object of the
// command's kind.
std::vector<AuditRequest> implicit_requests(const Workspace& ws, const std::string& command) {
  std::vector<AuditRequest> out;
  const auto add = [&](const std::string& target) {
    AuditRequest r;
    r.command = command;
    r.target = target;
    out.push_back(std::move(r));
  };
  if (command == "complete") {
    for (const auto& [n, _] : ws.posets) add(n);
  } else if (command == "retraction-laws") {
    for (const auto& [n, h] : ws.homs) {
      if (h.is_regular()) add(n);
    }
  } else if (command == "twostep-iso") {
    for (const auto& [n, h] : ws.homs) {
      if (h.is_regular()) add(n);
    }
    for (const auto& [n, _] : ws.presentations) add(n);
  } else if (command == "iterate") {
    for (const auto& [n, _] : ws.systems) add(n);
  } else if (command == "sg-audit") {
    for (const auto& [n, _] : ws.traces) add(n);
  } else if (command == "bvm-audit") {
    if (!ws.formulas.empty()) {
      for (const auto& [n, _] : ws.algebras) {
        AuditRequest r;
        r.command = command;
        r.algebra = n;
        r.standard_rank = 1;
        for (const auto& [f, _f] : ws.formulas) r.formulas.push_back(f);
        out.push_back(std::move(r));
      }
    }
  } else if (command == "gallery") {
    add("");
  }
  return out;
}

// ---- reports

Json check_json(const Check& c) {
  return Json{{"law", c.law}, {"passed", c.passed}, {"cases", c.cases}, {"witness", c.witness}};
}

std::string fixed(double secs) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << secs;
  return s.str();
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{"complete", "retraction-laws", "bvm-audit", "twostep-iso",
                                             "iterate",  "sg-audit",        "gallery",   "verify-all"};
  return cmds;
}

std::size_t Workspace::object_count() const {
  return algebras.size() + posets.size() + homs.size() + names.size() + formulas.size() + presentations.size() +
         systems.size() + traces.size() + audits.size();
}

Workspace parse_workspace(std::string_view text) {
  const Json doc = parse_json(text);
  Workspace ws;
  validated("workspace", [&] {
    require_keys(doc, {"format", "version", "algebras", "posets", "homs", "names", "formulas", "presentations",
                       "systems", "traces", "audits"});
    if (doc.value("format", std::string{}) != "forcing-workspace") {
      fail(ErrorKind::ValidationError, "format must be \"forcing-workspace\"");
    }
    if (doc.value("version", 0) != kWorkspaceVersion) {
      fail(ErrorKind::ValidationError, "version must be " + std::to_string(kWorkspaceVersion));
    }
    return 0;
  });
  section(doc, "algebras", ws.algebras, "algebra", [](const Json& j) {
    require_keys(j, {"atoms"});
    const auto n = j.at("atoms").get<std::size_t>();
    if (n == 0 || n > kMaxAtoms) fail(ErrorKind::TooManyAtoms, "atom count " + std::to_string(n));
    return FiniteCBA(n);
  });
  section(doc, "posets", ws.posets, "poset", poset_of);
  section(doc, "homs", ws.homs, "hom", [&](const Json& j) {
    require_keys(j, {"source", "target", "fiber_map"});
    return hom_from_fiber_map(lookup(ws.algebras, j.at("source").get<std::string>(), "algebra"),
                              lookup(ws.algebras, j.at("target").get<std::string>(), "algebra"),
                              j.at("fiber_map").get<std::vector<std::size_t>>());
  });
  section(doc, "names", ws.names, "name", [&](const Json& j) { return name_of(ws, j); });
  section(doc, "formulas", ws.formulas, "formula", [](const Json& j) { return Formula::parse(j.get<std::string>()); });
  section(doc, "presentations", ws.presentations, "presentation", [&](const Json& j) {
    require_keys(j, {"base", "fiber_atoms"});
    AtomwisePresentation p{lookup(ws.algebras, j.at("base").get<std::string>(), "algebra"),
                           j.at("fiber_atoms").get<std::vector<std::size_t>>()};
    build_two_step(p);
    return p;
  });
  section(doc, "systems", ws.systems, "system", [&](const Json& j) { return system_of(ws, j); });
  section(doc, "traces", ws.traces, "trace", [&](const Json& j) { return trace_of(ws, j); });
  if (doc.contains("audits")) {
    const Json& list = doc.at("audits");
    if (!list.is_array()) fail(ErrorKind::ValidationError, "audits must be a list");
    for (std::size_t k = 0; k < list.size(); ++k) {
      ws.audits.push_back(validated("audit " + std::to_string(k), [&] { return request_of(ws, list[k]); }));
    }
  }
  return ws;
}

Workspace load_workspace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ValidationError, "cannot read workspace '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_workspace(text.str());
}

std::string ReportEntry::verdict() const {
  if (!error_kind.empty()) return "ERROR";
  return result.passed() ? "PASS" : "FAIL";
}

bool AuditReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.verdict() == "PASS"; });
}

AuditReport execute(const Workspace& ws, const ExecOptions& options) {
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), options.command) == cmds.end()) {
    fail(ErrorKind::UnknownCommand, "unknown command '" + options.command + "'");
  }
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < ws.audits.size(); ++k) {
    if (options.command == "verify-all" || ws.audits[k].command == options.command) tasks.push_back({k, ws.audits[k]});
  }
  if (tasks.empty() && options.command != "verify-all") {
    for (auto& r : implicit_requests(ws, options.command)) tasks.push_back({tasks.size(), std::move(r)});
  }
  std::vector<std::future<std::vector<ReportEntry>>> running;
  for (const auto& t : tasks) {
    running.push_back(std::async(std::launch::async, [&ws, &t, &options] { return run_task(ws, t, options); }));
  }
  AuditReport report;
  report.command = options.command;
  report.seed = options.seed;
  for (auto& f : running) {
    for (auto& e : f.get()) report.entries.push_back(std::move(e));
  }
  return report;
}

std::string emit_report(const AuditReport& r, ReportFormat format, bool timings) {
  std::size_t pass = 0, failed = 0, errors = 0;
  for (const auto& e : r.entries) {
    const std::string v = e.verdict();
    (v == "PASS" ? pass : v == "FAIL" ? failed : errors)++;
  }
  if (format == ReportFormat::Human) {
    std::ostringstream s;
    s << "forcing-workbench report v" << kReportVersion << ": command " << r.command << ", seed " << r.seed << "\n";
    if (r.entries.empty()) return s.str();
    for (const auto& e : r.entries) {
      s << e.verdict() << " " << e.command;
      if (!e.target.empty()) s << " " << e.target;
      s << " [" << e.result.audit << "]";
      if (e.depth) s << " depth " << *e.depth;
      if (e.error_kind.empty()) s << " " << e.result.cases() << " cases";
      s << " " << fixed(e.seconds) << "s\n";
      if (!e.error_kind.empty()) {
        s << "  " << e.error_kind << ": " << e.error_detail << "\n";
      } else if (const Check* c = e.result.first_failure()) {
        s << "  " << c->law << ": " << c->witness << "\n";
      }
    }
    s << r.entries.size() << " audits: " << pass << " PASS, " << failed << " FAIL, " << errors << " ERROR\n";
    return s.str();
  }
  Json doc{{"schema", "forcing-report"}, {"version", kReportVersion}, {"command", r.command}, {"seed", r.seed}};
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json j{{"request", e.request}, {"command", e.command}, {"target", e.target}, {"audit", e.result.audit},
           {"verdict", e.verdict()}};
    if (e.depth) j["depth"] = *e.depth;
    j["cases"] = e.result.cases();
    Json checks = Json::array();
    for (const auto& c : e.result.checks) checks.push_back(check_json(c));
    j["checks"] = std::move(checks);
    Json facts = Json::object();
    for (const auto& [k, v] : e.result.facts) facts[k] = v;
    j["facts"] = std::move(facts);
    if (!e.error_kind.empty()) j["error"] = Json{{"kind", e.error_kind}, {"detail", e.error_detail}};
    if (timings) j["seconds"] = e.seconds;
    entries.push_back(std::move(j));
  }
  doc["entries"] = std::move(entries);
  doc["summary"] = Json{{"audits", r.entries.size()}, {"pass", pass}, {"fail", failed}, {"error", errors}};
  return doc.dump(2) + "\n";
}

AuditReport parse_report(std::string_view text) {
  const Json doc = parse_json(text);
  return validated("report", [&] {
    if (doc.at("schema").get<std::string>() != "forcing-report" || doc.at("version").get<int>() != kReportVersion) {
      fail(ErrorKind::ValidationError, "not a version " + std::to_string(kReportVersion) + " report");
    }
    AuditReport r;
    r.command = doc.at("command").get<std::string>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& j : doc.at("entries")) {
      ReportEntry e;
      e.request = j.at("request").get<std::size_t>();
      e.command = j.at("command").get<std::string>();
      e.target = j.at("target").get<std::string>();
      e.result.audit = j.at("audit").get<std::string>();
      if (j.contains("depth")) e.depth = j.at("depth").get<std::size_t>();
      for (const auto& c : j.at("checks")) {
        e.result.checks.push_back(Check{c.at("law").get<std::string>(), c.at("passed").get<bool>(),
                                        c.at("cases").get<std::size_t>(), c.at("witness").get<std::string>()});
      }
      for (const auto& [k, v] : j.at("facts").items()) e.result.facts[k] = v.get<std::string>();
      if (j.contains("error")) {
        e.error_kind = j.at("error").at("kind").get<std::string>();
        e.error_detail = j.at("error").at("detail").get<std::string>();
      }
      if (j.contains("seconds")) e.seconds = j.at("seconds").get<double>();
      if (e.verdict() != j.at("verdict").get<std::string>()) {
        fail(ErrorKind::ValidationError, "entry verdict disagrees with its checks");
      }
      r.entries.push_back(std::move(e));
    }
    return r;
  });
}

int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Workspace ws = load_workspace(options.workspace);
    const AuditReport r = execute(ws, options.exec);
    out << emit_report(r, options.format, options.timings || options.format == ReportFormat::Human);
    return r.passed() ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace forcing
