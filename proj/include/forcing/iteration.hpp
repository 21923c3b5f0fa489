#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/free_algebra.hpp"
#include "forcing/morphisms.hpp"

namespace forcing {

inline bool is_zero(const Element& e) { return e.none(); }
inline bool is_zero(const FreeElement& e) { return e.is_zero(); }
inline bool below(const Element& a, const Element& b) { return a.leq(b); }
inline bool below(const FreeElement& a, const FreeElement& b) { return a.leq(b); }

// An iteration system of algebras B_alpha with regular embeddings i_ab and
// retractions pi_ab for a <= b. Finite length, or length omega with a stage
// rule. Elements are E (finite algebra elements or free elements).
template <class E>
class IterationSystem {
 public:
  virtual ~IterationSystem() = default;

  // nullopt for length omega.
  virtual std::optional<std::size_t> length() const = 0;
  // Stages usable at audit depth `depth`: 0..result-1.
  std::size_t stages_to(std::size_t depth) const {
    const auto n = length();
    return n ? std::min(*n, depth + 1) : depth + 1;
  }

  virtual E embed(std::size_t a, std::size_t b, const E& x) const = 0;
  virtual E retract(std::size_t a, std::size_t b, const E& y) const = 0;
  // The largest x in B_a with i_ab(x) <= y.
  E dual_retract(std::size_t a, std::size_t b, const E& y) const { return complement(a, retract(a, b, complement(b, y))); }

  virtual E zero(std::size_t stage) const = 0;
  virtual E one(std::size_t stage) const = 0;
  virtual E complement(std::size_t stage, const E& x) const = 0;
  virtual bool contains(std::size_t stage, const E& x) const = 0;

  // Elements of B_stage to quantify over: all of them when the algebra is
  // small, else a seeded sample.
  virtual std::vector<E> sample(std::size_t stage, std::mt19937_64& rng, std::size_t count) const = 0;
};

// Finite algebras with fiber-map embeddings; the composed maps are cached.
// A lazy omega-length chain is materialized to a fixed number of stages.
class FiniteSystem : public IterationSystem<Element> {
 public:
  struct StageMap {
    std::size_t from;
    std::size_t to;
    CompleteHom hom;
  };

  // Adjacent maps (k, k+1) are required; any others are checked against the
  // composition. Throws NotRegular, CommutationFailure, ArityMismatch.
  static FiniteSystem build(std::vector<FiniteCBA> algebras, const std::vector<StageMap>& maps);
  static FiniteSystem chain(const std::vector<CompleteHom>& steps);
  // Length omega; stages 0..materialized-1 are built from step(k): B_k -> B_k+1.
  static FiniteSystem lazy(const std::function<CompleteHom(std::size_t)>& step, std::size_t materialized);

  std::optional<std::size_t> length() const override;
  std::size_t materialized() const { return algebras_.size(); }
  const FiniteCBA& algebra(std::size_t stage) const;
  const CompleteHom& map(std::size_t a, std::size_t b) const;

  Element embed(std::size_t a, std::size_t b, const Element& x) const override { return map(a, b).apply(x); }
  Element retract(std::size_t a, std::size_t b, const Element& y) const override { return map(a, b).retract(y); }
  Element zero(std::size_t stage) const override { return algebra(stage).zero(); }
  Element one(std::size_t stage) const override { return algebra(stage).one(); }
  Element complement(std::size_t, const Element& x) const override { return ~x; }
  bool contains(std::size_t stage, const Element& x) const override { return algebra(stage).contains(x); }
  std::vector<Element> sample(std::size_t stage, std::mt19937_64& rng, std::size_t count) const override;

 private:
  FiniteSystem() = default;

  std::vector<FiniteCBA> algebras_;
  std::vector<std::vector<CompleteHom>> maps_;  // maps_[a][b - a]
  bool omega_ = false;
};

// Free algebras B_n on the generators admitted at stage n (a growing family),
// with inclusions and existential projections.
class FreeTower : public IterationSystem<FreeElement> {
 public:
  FreeTower(std::function<bool(std::size_t, const Generator&)> in_stage,
            std::function<std::vector<Generator>(std::size_t)> sample_generators);

  std::optional<std::size_t> length() const override { return std::nullopt; }
  bool in_stage(std::size_t stage, const Generator& g) const { return in_stage_(stage, g); }

  FreeElement embed(std::size_t, std::size_t, const FreeElement& x) const override { return x; }
  FreeElement retract(std::size_t a, std::size_t b, const FreeElement& y) const override;
  FreeElement zero(std::size_t) const override { return FreeElement::zero(); }
  FreeElement one(std::size_t) const override { return FreeElement::one(); }
  FreeElement complement(std::size_t, const FreeElement& x) const override { return ~x; }
  bool contains(std::size_t stage, const FreeElement& x) const override;
  std::vector<FreeElement> sample(std::size_t stage, std::mt19937_64& rng, std::size_t count) const override;

 private:
  std::function<bool(std::size_t, const Generator&)> in_stage_;
  std::function<std::vector<Generator>(std::size_t)> sample_generators_;
};

// Regularity, commutation of embeddings and retractions, pi_ab o i_ab = id and
// join preservation, on all stage triples within depth.
template <class E>
AuditResult system_audit(const IterationSystem<E>& s, std::size_t depth, std::uint64_t seed = 0,
                         std::size_t samples = 12);

template <class E>
struct ConstantSeed {
  std::size_t support;
  E seed;
};

// A thread: a coordinate rule, and for constant threads the declared seed,
// which is the closed form beyond the audited depth. Threads built here refer
// to their system, which must outlive them.
template <class E>
struct Thread {
  std::function<E(std::size_t)> at;
  std::optional<ConstantSeed<E>> constant;
  std::string label;
};

// i_ab(seed) above the support, pi of it below; the support is lowered to the
// least stage the seed comes from.
template <class E>
Thread<E> constant_thread(const IterationSystem<E>& s, std::size_t stage, const E& seed);

Thread<Element> eager_thread(std::vector<Element> coordinates, std::string label = {});

struct ThreadCertificate {
  std::size_t depth;  // last stage checked
  std::size_t pairs;
};

// Throws CoherenceFailure(a,b) at the first pair with pi_ab(f(b)) != f(a).
template <class E>
ThreadCertificate thread_validate(const IterationSystem<E>& s, const Thread<E>& f, std::size_t depth);

template <class E>
Thread<E> pointwise_sup(const IterationSystem<E>& s, const std::vector<Thread<E>>& threads);

// Eventually g(a) & h(a), for a constant thread h.
template <class E>
Thread<E> meet_with_constant(const IterationSystem<E>& s, const Thread<E>& g, const Thread<E>& h);

// Checks the projections at `stage` form an antichain (else throws
// NotAntichainAtStage), that the pointwise sup is a thread and an upper
// bound, and for every nonzero candidate h below it (the supplied ones plus
// constants searched to depth) builds h' = h & i(f_k(stage)) and confirms it
// is a nonzero thread below both h and some f_k. Also checks no constant
// upper bound lies strictly below the pointwise sup.
template <class E>
AuditResult antichain_sup_audit(const IterationSystem<E>& s, const std::vector<Thread<E>>& threads, std::size_t stage,
                                std::size_t depth, const std::vector<Thread<E>>& candidates = {},
                                std::uint64_t seed = 0);

// Finite length: C(F) is all threads, and RO(C(F)) computed from the poset of
// nonzero threads corresponds to the threads by k(U) = join U, k^-1(f) =
// {g <= f}; both are checked mutually inverse and monotone. Last algebra
// <= 6 atoms.
AuditResult direct_limit_correspondence_audit(const FiniteSystem& s);

// Per coordinate n <= depth, the join of the largest constants below f with
// support <= depth, using coordinates up to depth + 1. Reports whether the
// lower bound reaches f (and from which support), or a gap: f nonzero with
// nothing nonzero below it.
template <class E>
struct LowerBound {
  std::vector<E> coordinates;
  std::optional<std::size_t> reached_at;  // least support whose constant equals f to depth
  bool gap = false;
  std::size_t depth = 0;
};

template <class E>
LowerBound<E> direct_limit_lower_bound(const IterationSystem<E>& s, const Thread<E>& f, std::size_t depth);

enum class Cofinality { ForcesCountable, Refutes, Unknown };

template <class E>
using CofinalityOracle = std::function<Cofinality(std::size_t, const E&)>;

// For length omega: every nonzero condition forces cf(omega) = omega.
template <class E>
CofinalityOracle<E> omega_oracle() {
  return [](std::size_t, const E& x) { return is_zero(x) ? Cofinality::Unknown : Cofinality::ForcesCountable; };
}

enum class RcsVerdict { Member, NonMember, Indeterminate };

struct RcsResult {
  RcsVerdict verdict;
  std::string reason;
  std::size_t depth;
};

std::string to_string(RcsVerdict v);

// Member if f is constant (finite length, or a declared seed matching to
// depth) or some coordinate forces countable cofinality; NonMember if the
// oracle refutes at every audited coordinate; otherwise Indeterminate.
template <class E>
RcsResult rcs_membership(const IterationSystem<E>& s, const Thread<E>& f, const CofinalityOracle<E>& oracle,
                         std::size_t depth);

// F/G for G the ultrafilter at `atom` of B_gamma: stages gamma+1.. restricted
// below i(atom), with the quotient maps. Throws NotEager for omega length.
struct QuotientSystem {
  std::size_t gamma;
  std::size_t atom;
  std::vector<Relativization> stages;  // stage gamma+1+k
  std::optional<FiniteSystem> system;  // empty when gamma is the last stage
};

QuotientSystem quotient_system(const FiniteSystem& s, std::size_t gamma, std::size_t atom);

// Given, for every atom u of B_gamma, a thread of F/G_u (coordinates at
// stages gamma+1..), the unique thread g of F whose classes are those.
// Throws CoherenceFailure for an incoherent family.
Thread<Element> quotient_thread_representative(const FiniteSystem& s, std::size_t gamma,
                                               const std::vector<std::vector<Element>>& families);

// Representatives are threads, have the given classes, and are unique.
AuditResult quotient_thread_audit(const FiniteSystem& s, std::size_t gamma, std::uint64_t seed = 0);

// F restricted to the stages of a strictly increasing cofinal index map;
// threads correspond by restriction, and membership verdicts agree.
FiniteSystem reindex(const FiniteSystem& s, const std::vector<std::size_t>& stages);
AuditResult reindex_audit(const FiniteSystem& s, const std::vector<std::size_t>& stages, std::uint64_t seed = 0);

}  // namespace forcing
