#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/morphisms.hpp"

namespace forcing {

// A name for an ordinal below kappa: the value labels[k] on antichain[k].
struct OrdinalName {
  std::vector<Element> antichain;
  std::vector<std::size_t> labels;
};

// A finite stand-in for a countable M inside H_theta: the elements of B in M,
// the predense sets and maximal antichains that belong to M, and ordinals
// kappa with M's part delta = {0, ..., delta - 1}.
struct ModelTrace {
  FiniteCBA algebra;
  std::vector<Element> carrier;
  std::vector<std::vector<Element>> designated_predense;
  std::vector<std::vector<Element>> designated_antichains;
  std::size_t kappa = 1;
  std::size_t delta = 1;
  std::vector<OrdinalName> ordinal_names;

  bool in_carrier(const Element& x) const;
};

// Throws NotPredense, NotMaximal, LabelOutOfRange, MixedAlgebras or
// ValidationError for the first defect found.
void validate_trace(const ModelTrace& t);

// Meet over designated predense sets and antichains D of join(D & M); 1 when
// nothing is designated.
Element sg_value(const ModelTrace& t);
// The same meet over designated antichains only.
Element gen_value(const ModelTrace& t);

// a_k = b_k & ~(b_0 | ... | b_{k-1}), zeros dropped. Throws NotPredense.
std::vector<Element> disjointify(const FiniteCBA& algebra, const std::vector<Element>& list);

// A_D is a maximal antichain refining D termwise; with every A_D designated,
// sg equals the meet over antichains provided the carrier has b_k whenever it
// has a_k. A carrier without that closure is reported, not failed.
AuditResult disjointification_audit(const ModelTrace& t);

// The trace below b: carrier and designated sets met with b. Throws
// NotInCarrier.
ModelTrace restrict_trace(const ModelTrace& t, const Element& b);

// sg(B|b, M) = sg(B, M) & b. The inequality >= always; equality when every
// d & b in M comes from some d' in D & M (reported otherwise).
AuditResult restriction_audit(const ModelTrace& t, const Element& b);

// The ordinal name of an antichain: members in M get labels below delta,
// the rest labels from delta on. Throws LabelOutOfRange if kappa is too small.
OrdinalName ordinal_name_of(const ModelTrace& t, const std::vector<Element>& antichain);
// The antichain of nonzero level sets [[name = beta]].
std::vector<Element> antichain_of(const ModelTrace& t, const OrdinalName& name);
// [[name < delta]].
Element below_delta(const ModelTrace& t, const OrdinalName& name);

// sg computed from antichains equals the join of all q forcing every
// designated name below delta (exhaustive over q), and that join is itself
// such a q.
AuditResult semigeneric_sup_audit(const ModelTrace& t);

// For c in the target carrier: pi(c & sg(C)) = pi(c) & sg(B); and sg(B) meets
// every nonzero b of the source carrier. Failures are reported.
AuditResult sp_identity_audit(const CompleteHom& h, const ModelTrace& source, const ModelTrace& target);

// Random trace on `atoms` atoms whose carrier is a subalgebra closed so that
// the restriction and disjointification preconditions hold.
ModelTrace random_model_trace(std::mt19937_64& rng, std::size_t atoms);

// Disjointification, restriction at every nonzero carrier element, and the
// semigeneric supremum, on one trace.
AuditResult sg_audit(const ModelTrace& t);

}  // namespace forcing
