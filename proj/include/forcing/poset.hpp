#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "forcing/audit.hpp"
#include "forcing/finite_cba.hpp"

namespace forcing {

// A finite forcing poset. Stronger conditions are smaller. Subsets of the
// carrier are passed around as Elements of the |P|-atom algebra.
class Poset {
 public:
  // `leq[p][q]` is p <= q; must be a partial order.
  Poset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq);

  // Reflexive-transitive closure of the given (p, q) pairs, meaning p <= q.
  static Poset from_relation(std::vector<std::string> labels,
                             const std::vector<std::pair<std::size_t, std::size_t>>& below);
  static Poset chain(std::size_t n);      // 0 < 1 < ... < n-1
  static Poset antichain(std::size_t n);
  // Root on top, `height` levels of binary branching beneath it.
  static Poset reversed_tree(std::size_t height);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t p) const { return labels_[p]; }
  std::size_t index_of(const std::string& label) const;
  bool leq(std::size_t p, std::size_t q) const { return leq_[p][q]; }
  bool compatible(std::size_t p, std::size_t q) const;

  Element empty_set() const { return Element(size()); }
  Element everything() const { return Element::full(size()); }
  Element down(std::size_t p) const;
  Element down(const Element& set) const;
  bool is_open(const Element& set) const { return down(set) == set; }

  // `dense` is dense below every point of `region`.
  bool dense_in(const Element& dense, const Element& region) const;
  bool is_dense(const Element& set) const { return dense_in(set, everything()); }
  bool is_predense(const Element& set) const { return is_dense(down(set)); }
  bool is_antichain(const Element& set) const;
  bool is_maximal_antichain(const Element& set) const;
  bool is_separative() const;

  // A <=* B: the common part of the down-closures is dense in down(A).
  bool star_leq(const Element& a, const Element& b) const;
  bool star_equiv(const Element& a, const Element& b) const { return star_leq(a, b) && star_leq(b, a); }

  // Greedy maximal antichain among the points of `set`.
  Element maximal_antichain_within(const Element& set) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
  std::vector<Element> down_;
};

struct SeparativeQuotient {
  Poset quotient;
  std::vector<std::size_t> class_of;  // point of P -> point of the quotient
};

SeparativeQuotient separative_quotient(const Poset& p);

// The regular-open completion: `embedding[p]` is the image of p.
struct Completion {
  FiniteCBA algebra;
  std::vector<Element> embedding;
};

Completion boolean_completion(const Poset& p);

// Order preservation, incompatibility preservation, dense image.
AuditResult audit_completion(const Poset& p, const Completion& c);

// Dense sets contain maximal antichains; maximal antichains are predense.
AuditResult audit_dense_antichain_facts(const Poset& p);

}  // namespace forcing
