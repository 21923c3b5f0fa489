#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forcing {

// A generator name such as "x3" or "y0": a family prefix plus an optional
// numeric index. Generators are totally ordered by (family, index), and that
// order is the variable order of every normal form.
struct Generator {
  std::string family;
  std::int64_t index = -1;  // -1 when the name carries no index

  static Generator parse(std::string_view name);
  static Generator of(std::string family, std::int64_t index) { return {std::move(family), index}; }
  std::string name() const;

  auto operator<=>(const Generator&) const = default;
};

struct FreeNode;

// An element of the free Boolean algebra on the generators, kept as a reduced
// ordered decision diagram. Nodes are hash-consed process-wide, so equal
// elements share a root and equality is pointer equality.
class FreeElement {
 public:
  FreeElement();  // 0
  static FreeElement zero();
  static FreeElement one();
  static FreeElement generator(const Generator& g);
  static FreeElement generator(std::string_view name) { return generator(Generator::parse(name)); }
  // Parses an expression over generators with & | ~ (or the Unicode
  // connectives), 0 and 1.
  static FreeElement parse(std::string_view text);

  FreeElement operator&(const FreeElement& o) const;
  FreeElement operator|(const FreeElement& o) const;
  FreeElement operator^(const FreeElement& o) const;
  FreeElement operator~() const;
  FreeElement& operator&=(const FreeElement& o) { return *this = *this & o; }
  FreeElement& operator|=(const FreeElement& o) { return *this = *this | o; }

  bool is_zero() const;
  bool is_one() const;
  bool leq(const FreeElement& o) const { return (*this & ~o).is_zero(); }
  bool disjoint(const FreeElement& o) const { return (*this & o).is_zero(); }
  bool operator==(const FreeElement& o) const { return root_ == o.root_; }

  // Generators the element actually depends on, in order.
  std::vector<Generator> support() const;
  // Existential / universal quantification over the generators selected by
  // `pick`.
  FreeElement exists(const std::function<bool(const Generator&)>& pick) const;
  FreeElement forall(const std::function<bool(const Generator&)>& pick) const;
  FreeElement cofactor(const Generator& g, bool value) const;
  bool evaluate(const std::function<bool(const Generator&)>& assignment) const;

  std::size_t node_count() const;
  // Canonical sum of the satisfying paths, e.g. "x0 & ~y1 | x1".
  std::string to_string() const;

  const FreeNode* root() const { return root_; }

 private:
  explicit FreeElement(const FreeNode* root) : root_(root) {}
  friend struct FreeOps;
  const FreeNode* root_;
};

// Expression syntax tree accepted by free_normalize.
struct FreeExpr {
  enum class Op { Const, Var, Not, And, Or };
  Op op = Op::Const;
  bool value = false;
  Generator var;
  std::vector<FreeExpr> args;
};

FreeExpr parse_free_expr(std::string_view text);
FreeElement free_normalize(const FreeExpr& expr);

// The least element above `e` that does not mention `eliminated`, i.e. the
// retraction of Free(rest) -> Free(all).
FreeElement free_project(const FreeElement& e, const std::vector<Generator>& eliminated);
FreeElement free_project_onto(const FreeElement& e, const std::function<bool(const Generator&)>& keep);
// The greatest element below `e` not mentioning the dropped generators.
FreeElement free_dual_project_onto(const FreeElement& e, const std::function<bool(const Generator&)>& keep);

struct ChainVerdict {
  enum class Kind { LowerBoundZero, FailsAt };
  Kind kind;
  std::size_t n;  // the stage at which the verdict was reached
  bool operator==(const ChainVerdict&) const = default;
  std::string to_string() const;
};

// Decides whether h lies below every member of the descending chain
// a_n = rule(n). Walks n = 0, 1, ... and stops at the first a_n above which h
// fails, or at the first a_n whose universal projection onto supp(h) is 0,
// which forces h = 0. Throws ChainNotDescending(n) or, when neither happens
// within `max_depth`, SupportEscapeViolation.
ChainVerdict chain_vanishing(const FreeElement& h, const std::function<FreeElement(std::size_t)>& rule,
                             std::optional<std::size_t> max_depth = std::nullopt);

}  // namespace forcing
