#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/morphisms.hpp"

namespace forcing {

// A name for a complete Boolean algebra in V^B, given atomwise: below base
// atom a the algebra has fiber_atoms[a] atoms.
struct AtomwisePresentation {
  FiniteCBA base;
  std::vector<std::size_t> fiber_atoms;
};

// B * C-dot, built as the disjoint sum of the fibers. Atom (a, d) is numbered
// offset(a) + d.
class TwoStep {
 public:
  explicit TwoStep(const AtomwisePresentation& p);

  const FiniteCBA& base() const { return base_; }
  const FiniteCBA& algebra() const { return algebra_; }
  const CompleteHom& embedding() const { return embedding_; }
  std::size_t fiber_atoms(std::size_t a) const { return fibers_[a]; }
  std::size_t atom_of(std::size_t a, std::size_t d) const { return offset_[a] + d; }
  std::pair<std::size_t, std::size_t> coords(std::size_t t) const;

  // The element whose a-th coordinate is choice[a] (an element of fiber a).
  Element from_choice(const std::vector<Element>& choice) const;
  std::vector<Element> choice(const Element& c) const;
  // [[c = e]]: the base atoms where the coordinates agree.
  Element agree(const Element& c, const Element& e) const;

 private:
  FiniteCBA base_;
  std::vector<std::size_t> fibers_;
  std::vector<std::size_t> offset_;
  FiniteCBA algebra_;
  CompleteHom embedding_;
};

// Throws EmptyFiber for a zero-atom fiber and ArityMismatch for a wrong count.
TwoStep build_two_step(const AtomwisePresentation& p);

// i regular, pi(c) = [[c > 0]], [[d_b = 1]] = b and [[d_b = 0]] = ~b for
// d_b = i(b), and the retraction laws for the pair.
AuditResult two_step_audit(const TwoStep& t, const SamplingOptions& options = {});

// Nonzero, pairwise disjoint, joining to 1.
bool is_maximal_antichain(const FiniteCBA& algebra, const std::vector<Element>& family);

// C/G for the ultrafilter G at base atom a: C restricted to i({a}).
struct QuotientAlgebra {
  Relativization algebra;
  Element class_of(const Element& c) const { return algebra.lower(c); }
};

// Throws NotRegular.
QuotientAlgebra quotient_algebra(const CompleteHom& h, std::size_t base_atom);

// [join of a family] = join of the classes, on all families of quotient
// elements (needs <= 4 quotient atoms).
AuditResult quotient_sup_audit(const CompleteHom& h, std::size_t base_atom);

// c = join of i(a_k) & reps[k] over a maximal antichain of the base.
// Throws NotMaximalAntichain.
Element canonical_representative(const CompleteHom& h, const std::vector<Element>& antichain,
                                 const std::vector<Element>& reps);

// c has the prescribed class below every antichain member, and is the only
// such element.
AuditResult canonical_representative_audit(const CompleteHom& h, const std::vector<Element>& antichain,
                                           const std::vector<Element>& reps);

// B * (a |-> C/G_a) and the isomorphism onto C, as the atom relabeling
// (a, d) |-> d-th atom of the fiber over a.
struct TwoStepIso {
  TwoStep two_step;
  CompleteHom to_target;  // B * (C/G) -> C
};

TwoStepIso two_step_iso(const CompleteHom& h);

// c |-> (its class at every a) is a bijection C -> B * (C/G) preserving joins
// and complements and commuting with the base embeddings and retractions.
AuditResult two_step_iso_audit(const CompleteHom& h, const SamplingOptions& options = {});

// B -> C0 -> C1 with i0 then j equal to i1. Throws NonCommuting.
struct Triangle {
  CompleteHom i0;
  CompleteHom i1;
  CompleteHom j;
};

Triangle make_triangle(CompleteHom i0, CompleteHom i1, CompleteHom j);

// j/G: C0/G -> C1/G at base atom u.
struct QuotientHom {
  Relativization source;
  Relativization target;
  CompleteHom hom;
};

QuotientHom quotient_hom(const Triangle& t, std::size_t base_atom);

// For every base atom: j/G is well defined, a regular complete embedding,
// and its retraction is the quotient of pi_j.
AuditResult quotient_hom_audit(const Triangle& t, const SamplingOptions& options = {});

// Fiberwise embeddings k_a: fiber0(a) -> fiber1(a) induce B * C0 -> B * C1.
struct LiftedEmbedding {
  TwoStep lower;
  TwoStep upper;
  CompleteHom hom;
};

// Throws FiberNotRegular(a) or ArityMismatch.
LiftedEmbedding lift_embedding_name(const FiniteCBA& base, const std::vector<CompleteHom>& fiberwise);
AuditResult lift_embedding_audit(const LiftedEmbedding& l, const std::vector<CompleteHom>& fiberwise);

// B * C * D, given atomwise: mid[a] atoms over base atom a, top[a][d] atoms
// over the mid atom (a, d).
struct ThreeStepTower {
  FiniteCBA base;
  std::vector<std::size_t> mid;
  std::vector<std::vector<std::size_t>> top;
};

// For every G on B and K on (B * C)/G: ((B*C)*D / G) / K is (B*C)*D / H
// with H = {c : [c]_G in K}. Throws ShapeMismatch.
AuditResult three_step_assoc_audit(const ThreeStepTower& tower, const SamplingOptions& options = {});

}  // namespace forcing
