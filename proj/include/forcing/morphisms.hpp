#pragma once

#include <cstdint>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"

namespace forcing {

// A complete homomorphism i: B -> C between finite algebras, stored by its
// dual point map: fiber_map[t] is the atom of B below which target atom t
// sits. i(b) is the preimage of b, the retraction pi(c) the image of c.
class CompleteHom {
 public:
  CompleteHom(const FiniteCBA& source, const FiniteCBA& target, std::vector<std::size_t> fiber_map);
  static CompleteHom identity(const FiniteCBA& algebra);

  const FiniteCBA& source() const { return source_; }
  const FiniteCBA& target() const { return target_; }
  const std::vector<std::size_t>& fiber_map() const { return fiber_map_; }

  Element apply(const Element& b) const;
  Element retract(const Element& c) const;
  Element fiber(std::size_t source_atom) const { return fibers_.at(source_atom); }
  bool is_regular() const;     // injective
  bool is_surjective() const;  // an isomorphism when also regular

  // this followed by next: B -> C -> D.
  CompleteHom then(const CompleteHom& next) const;

  bool operator==(const CompleteHom& o) const {
    return source_ == o.source_ && target_ == o.target_ && fiber_map_ == o.fiber_map_;
  }

 private:
  FiniteCBA source_;
  FiniteCBA target_;
  std::vector<std::size_t> fiber_map_;
  std::vector<Element> fibers_;
};

// Throws ArityMismatch for a map of the wrong length or out-of-range values.
CompleteHom hom_from_fiber_map(const FiniteCBA& source, const FiniteCBA& target, std::vector<std::size_t> fiber_map);

// i_c: B restricted to pi(c) -> C restricted to c.
struct RestrictedHom {
  Relativization source;
  Relativization target;
  CompleteHom hom;
};

RestrictedHom restrict(const CompleteHom& h, const Element& c);

struct KerCoker {
  Element ker;    // the largest b with i(b) = 0
  Element coker;  // its complement
  RestrictedHom regular_part;
};

KerCoker ker_coker(const CompleteHom& h);

// The target's atoms, partitioned by which source atom they lie over.
struct StoneDual {
  std::vector<std::size_t> point_map;  // target ultrafilter -> source ultrafilter
  std::vector<Element> cells;          // per source atom, the target atoms over it
};

StoneDual stone_dual_quotient(const CompleteHom& h);

struct SamplingOptions {
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::size_t samples = 48;
};

// The retraction laws, predense transfer, generic preimages and images, the
// Stone dual, restriction, and the failure of meet preservation when i is not
// onto. Throws NotRegular.
AuditResult retraction_laws_audit(const CompleteHom& h, const SamplingOptions& options = {});

// For an arbitrary map of elements (indexed by source mask): join-completeness
// against "every target ultrafilter pulls back to an ultrafilter". On failure
// the violating target ultrafilter is reported. Source must have <= 4 atoms.
AuditResult join_completeness_audit(const FiniteCBA& source, const FiniteCBA& target,
                                    const std::vector<Element>& table);

// Predense in a finite algebra, by the definition: every nonzero element meets
// some member.
bool is_predense(const FiniteCBA& algebra, const std::vector<Element>& family);

}  // namespace forcing
