#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace forcing {

// One law checked over some number of cases. A failing check carries the
// first counterexample found.
struct Check {
  std::string law;
  bool passed = true;
  std::size_t cases = 0;
  std::string witness;
};

struct AuditResult {
  std::string audit;
  std::vector<Check> checks;
  // Extra facts worth reporting (chosen witnesses, certified depths, values).
  std::map<std::string, std::string> facts;

  bool passed() const;
  std::size_t cases() const;
  // First failing check, or nullptr.
  const Check* first_failure() const;
  std::string summary() const;
};

// Accumulates cases for one law; keeps only the first witness.
class CheckBuilder {
 public:
  explicit CheckBuilder(std::string law) { check_.law = std::move(law); }

  // Returns `ok` so callers can stop early if they wish.
  bool expect(bool ok, const std::string& witness_if_bad = {});
  template <class F>
  bool expect_lazy(bool ok, F&& witness) {
    ++check_.cases;
    if (!ok && check_.passed) {
      check_.passed = false;
      check_.witness = witness();
    }
    return ok;
  }
  bool passed() const { return check_.passed; }
  Check done() const { return check_; }

 private:
  Check check_;
};

}  // namespace forcing
