#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/morphisms.hpp"

namespace forcing {

// A hereditarily finite set, kept with its members sorted and deduplicated.
class HFSet {
 public:
  HFSet() = default;
  static HFSet of(std::vector<HFSet> members);
  // "{}", "{{},{{}}}"
  static HFSet parse(std::string_view text);

  const std::vector<HFSet>& members() const { return members_; }
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& x) const;
  std::size_t rank() const { return rank_; }
  std::string to_string() const;

  bool operator==(const HFSet& o) const { return members_ == o.members_; }
  std::strong_ordering operator<=>(const HFSet& o) const;

 private:
  std::vector<HFSet> members_;
  std::size_t rank_ = 0;
};

// All hereditarily finite sets of rank <= r, ordered.
std::vector<HFSet> hf_sets_of_rank_at_most(std::size_t r);

struct NameNode;
struct NameEntry;

// A B-name in partial-function form: a finite list of (name, nonzero value)
// with distinct names. Relation-form input is collapsed by joining the values
// attached to the same name.
class BName {
 public:
  using Entry = NameEntry;

  static BName empty(std::size_t atoms);
  static BName check(const HFSet& x, std::size_t atoms);
  static BName from_entries(std::size_t atoms, std::vector<Entry> entries);

  std::size_t atoms() const;
  std::size_t rank() const;
  const std::vector<Entry>& entries() const;
  Element value_at(const BName& child) const;  // 0 off the domain
  const NameNode* id() const { return node_.get(); }

  std::strong_ordering operator<=>(const BName& o) const;
  bool operator==(const BName& o) const { return (*this <=> o) == 0; }
  std::string to_string() const;

 private:
  std::shared_ptr<const NameNode> node_;
};

struct NameEntry {
  BName name;
  Element value;
};

// Formulas of set theory over variables: atoms x in y, x = y, x sub y;
// connectives; bounded quantifiers; and unbounded exists, which makes the
// formula Sigma_1 and is read relative to a pool of names.
class Formula {
 public:
  enum class Kind { In, Eq, Sub, Not, And, Or, BoundedExists, BoundedForall, Exists };

  static Formula atom(Kind k, std::string lhs, std::string rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula f, Formula g);
  static Formula disjunction(Formula f, Formula g);
  static Formula bounded(Kind k, std::string var, std::string bound, Formula body);
  static Formula exists(std::string var, Formula body);
  // "x in y", "~(x = y) & E z in x. z sub y", "exists z. z in x"
  static Formula parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& lhs() const { return lhs_; }  // first variable / bound variable
  const std::string& rhs() const { return rhs_; }  // second variable / bound
  const Formula& child(std::size_t k) const { return children_.at(k); }

  bool is_delta0() const;
  std::vector<std::string> free_variables() const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::Eq;
  std::string lhs_, rhs_;
  std::vector<Formula> children_;
};

using NameEnv = std::map<std::string, BName>;
using HFEnv = std::map<std::string, HFSet>;

inline constexpr std::size_t kDefaultRankBound = 4;

// Boolean truth values with memoised atomic values. Keeps the names it has
// seen alive, so the memo stays valid.
class Valuator {
 public:
  explicit Valuator(std::size_t atoms, std::vector<BName> pool = {}, std::size_t rank_bound = kDefaultRankBound);

  Element member(const BName& a, const BName& b);
  Element equal(const BName& a, const BName& b);
  Element subset(const BName& a, const BName& b);
  Element value(const Formula& f, const NameEnv& env);

  const std::vector<BName>& pool() const { return pool_; }
  std::size_t atoms() const { return atoms_; }

 private:
  using Key = std::pair<const NameNode*, const NameNode*>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  void admit(const BName& n);
  Element member_raw(const BName& a, const BName& b);
  Element equal_raw(const BName& a, const BName& b);
  Element subset_raw(const BName& a, const BName& b);
  Element eval(const Formula& f, NameEnv& env);

  std::size_t atoms_;
  std::vector<BName> pool_;
  std::size_t rank_bound_;
  std::unordered_map<Key, Element, KeyHash> eq_memo_, sub_memo_;
  std::vector<BName> pinned_;
};

Element truth_value(const Formula& f, const NameEnv& env, std::size_t atoms, const std::vector<BName>& pool = {},
                    std::size_t rank_bound = kDefaultRankBound);

// The interpretation of the name in the generic extension by the ultrafilter
// at `atom`.
HFSet eval_at_atom(const BName& name, std::size_t atom);

// Truth of a formula among hereditarily finite sets; unbounded exists ranges
// over `pool`.
bool hf_holds(const Formula& f, const HFEnv& env, const std::vector<HFSet>& pool);

// All names whose domain is drawn from the check names of HF sets of rank
// <= domain_rank, with nonzero values.
std::vector<BName> standard_pool(std::size_t atoms, std::size_t domain_rank);

// For every atom and every instance of every formula with parameters from
// the pool: u in [[phi]] iff phi holds of the interpretations at u.
AuditResult forcing_audit(std::size_t atoms, const std::vector<BName>& pool, const std::vector<Formula>& formulas,
                          std::size_t rank_bound = kDefaultRankBound);

// The name that is names[k] below antichain[k]. Throws NotAntichain.
BName mix(const std::vector<Element>& antichain, const std::vector<BName>& names);

struct FullnessWitness {
  BName witness;
  Element exists_value;   // [[exists x phi]] over the pool
  Element witness_value;  // [[phi(witness)]]
};

// Throws EmptyPool.
FullnessWitness fullness_witness(const Formula& phi, const std::string& var, const NameEnv& env,
                                 const std::vector<BName>& pool, std::size_t atoms);

// Relabels a B-name along i: B -> C.
BName lift_name(const CompleteHom& h, const BName& name);

// i([[phi]]_B) = [[phi^]]_C for Delta_0 phi; the Sigma_1 inequality
// i([[s]]_B) <= [[s^]]_C for unbounded formulas; and for each (s, t) pair
// given as Delta_1 (t meant as the negation of s), both inequalities plus
// the equality they force.
AuditResult delta1_audit(const CompleteHom& h, const std::vector<BName>& pool, const std::vector<Formula>& formulas,
                         const std::vector<std::pair<Formula, Formula>>& delta1_pairs = {},
                         std::size_t rank_bound = kDefaultRankBound);

}  // namespace forcing
