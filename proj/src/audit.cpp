#include "forcing/audit.hpp"

namespace forcing {

bool AuditResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::size_t AuditResult::cases() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.cases;
  return n;
}

const Check* AuditResult::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string AuditResult::summary() const {
  std::string s = audit + ": " + (passed() ? "PASS" : "FAIL") + " (" + std::to_string(cases()) + " cases)";
  if (const auto* f = first_failure()) s += " first failure " + f->law + ": " + f->witness;
  return s;
}

bool CheckBuilder::expect(bool ok, const std::string& witness_if_bad) {
  ++check_.cases;
  if (!ok && check_.passed) {
    check_.passed = false;
    check_.witness = witness_if_bad;
  }
  return ok;
}

}  // namespace forcing
