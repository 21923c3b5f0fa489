#include "forcing/poset.hpp"

#include <algorithm>

#include "forcing/errors.hpp"

namespace forcing {

Poset::Poset(std::vector<std::string> labels, std::vector<std::vector<bool>> leq)
    : labels_(std::move(labels)), leq_(std::move(leq)) {
  const std::size_t n = labels_.size();
  if (n == 0) fail(ErrorKind::InvalidPoset, "empty poset");
  if (n > kMaxAtoms) fail(ErrorKind::TooManyAtoms, "poset with " + std::to_string(n) + " points");
  if (leq_.size() != n) fail(ErrorKind::InvalidPoset, "order matrix has wrong shape");
  for (const auto& row : leq_) {
    if (row.size() != n) fail(ErrorKind::InvalidPoset, "order matrix has wrong shape");
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!leq_[p][p]) fail(ErrorKind::InvalidPoset, "not reflexive at " + labels_[p]);
    for (std::size_t q = 0; q < n; ++q) {
      if (p != q && leq_[p][q] && leq_[q][p]) {
        fail(ErrorKind::InvalidPoset, "not antisymmetric: " + labels_[p] + ", " + labels_[q]);
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (leq_[p][q] && leq_[q][r] && !leq_[p][r]) {
          fail(ErrorKind::InvalidPoset, "not transitive: " + labels_[p] + " <= " + labels_[q] + " <= " + labels_[r]);
        }
      }
    }
  }
  down_.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    Element d(n);
    for (std::size_t q = 0; q < n; ++q) {
      if (leq_[q][p]) d.set(q);
    }
    down_.push_back(d);
  }
}

Poset Poset::from_relation(std::vector<std::string> labels,
                           const std::vector<std::pair<std::size_t, std::size_t>>& below) {
  const std::size_t n = labels.size();
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
  for (std::size_t p = 0; p < n; ++p) m[p][p] = true;
  for (auto [p, q] : below) {
    if (p >= n || q >= n) fail(ErrorKind::InvalidPoset, "relation mentions an unknown point");
    m[p][q] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (m[k][j]) m[i][j] = true;
      }
    }
  }
  return Poset(std::move(labels), std::move(m));
}

Poset Poset::chain(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("c" + std::to_string(i));
    if (i > 0) rel.emplace_back(i - 1, i);
  }
  return from_relation(std::move(labels), rel);
}

Poset Poset::antichain(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  return from_relation(std::move(labels), {});
}

Poset Poset::reversed_tree(std::size_t height) {
  std::vector<std::string> labels{"r"};
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  std::size_t level_begin = 0;
  for (std::size_t level = 1; level < height; ++level) {
    const std::size_t level_end = labels.size();
    for (std::size_t parent = level_begin; parent < level_end; ++parent) {
      for (char bit : {'0', '1'}) {
        labels.push_back(labels[parent] + bit);
        rel.emplace_back(labels.size() - 1, parent);
      }
    }
    level_begin = level_end;
  }
  return from_relation(std::move(labels), rel);
}

std::size_t Poset::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) fail(ErrorKind::UnresolvedReference, "no point labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

bool Poset::compatible(std::size_t p, std::size_t q) const { return !down_[p].disjoint(down_[q]); }

Element Poset::down(std::size_t p) const { return down_[p]; }

Element Poset::down(const Element& set) const {
  Element out = empty_set();
  for (auto p : set.atoms()) out |= down_[p];
  return out;
}

bool Poset::dense_in(const Element& dense, const Element& region) const {
  for (auto p : region.atoms()) {
    if (down_[p].disjoint(dense)) return false;
  }
  return true;
}

bool Poset::is_antichain(const Element& set) const {
  auto pts = set.atoms();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (compatible(pts[i], pts[j])) return false;
    }
  }
  return true;
}

bool Poset::is_maximal_antichain(const Element& set) const {
  if (!is_antichain(set)) return false;
  for (std::size_t p = 0; p < size(); ++p) {
    bool meets = false;
    for (auto a : set.atoms()) meets = meets || compatible(p, a);
    if (!meets) return false;
  }
  return true;
}

bool Poset::is_separative() const {
  for (std::size_t p = 0; p < size(); ++p) {
    for (std::size_t q = 0; q < size(); ++q) {
      if (leq(p, q)) continue;
      bool split = false;
      for (auto r : down_[p].atoms()) split = split || !compatible(r, q);
      if (!split) return false;
    }
  }
  return true;
}

bool Poset::star_leq(const Element& a, const Element& b) const {
  const Element da = down(a);
  return dense_in(da & down(b), da);
}

Element Poset::maximal_antichain_within(const Element& set) const {
  Element chosen = empty_set();
  for (auto p : set.atoms()) {
    bool free = true;
    for (auto a : chosen.atoms()) free = free && !compatible(p, a);
    if (free) chosen.set(p);
  }
  return chosen;
}

SeparativeQuotient separative_quotient(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> class_of(n, n);
  std::vector<std::size_t> reps;
  for (std::size_t x = 0; x < n; ++x) {
    const Element sx = Element::of(n, {x});
    for (std::size_t k = 0; k < reps.size(); ++k) {
      if (p.star_equiv(sx, Element::of(n, {reps[k]}))) {
        class_of[x] = k;
        break;
      }
    }
    if (class_of[x] == n) {
      class_of[x] = reps.size();
      reps.push_back(x);
    }
  }
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> m(reps.size(), std::vector<bool>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    labels.push_back(p.label(reps[i]));
    for (std::size_t j = 0; j < reps.size(); ++j) {
      m[i][j] = p.star_leq(Element::of(n, {reps[i]}), Element::of(n, {reps[j]}));
    }
  }
  return {Poset(std::move(labels), std::move(m)), std::move(class_of)};
}

Completion boolean_completion(const Poset& p) {
  const std::size_t n = p.size();
  auto single = [n](std::size_t x) { return Element::of(n, {x}); };
  // Atoms of the completion are the <=*-minimal principal classes.
  std::vector<std::size_t> atom_reps;
  for (std::size_t x = 0; x < n; ++x) {
    bool minimal = true;
    for (std::size_t y = 0; y < n && minimal; ++y) {
      if (p.star_leq(single(y), single(x)) && !p.star_leq(single(x), single(y))) minimal = false;
    }
    if (!minimal) continue;
    bool fresh = true;
    for (auto r : atom_reps) fresh = fresh && !p.star_equiv(single(x), single(r));
    if (fresh) atom_reps.push_back(x);
  }
  Completion c{FiniteCBA(atom_reps.size()), {}};
  for (std::size_t x = 0; x < n; ++x) {
    Element img = c.algebra.zero();
    for (std::size_t k = 0; k < atom_reps.size(); ++k) {
      if (p.star_leq(single(atom_reps[k]), single(x))) img.set(k);
    }
    c.embedding.push_back(img);
  }
  return c;
}

AuditResult audit_completion(const Poset& p, const Completion& c) {
  AuditResult r{"completion", {}, {}};
  CheckBuilder order("order-preserving");
  CheckBuilder incompat("incompatibility-preserving");
  CheckBuilder nonzero("image-nonzero");
  for (std::size_t x = 0; x < p.size(); ++x) {
    nonzero.expect(c.embedding[x].any(), p.label(x));
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (p.leq(x, y)) {
        order.expect_lazy(c.embedding[x].leq(c.embedding[y]), [&] { return p.label(x) + " <= " + p.label(y); });
      }
      if (!p.compatible(x, y)) {
        incompat.expect_lazy(c.embedding[x].disjoint(c.embedding[y]),
                             [&] { return p.label(x) + " _|_ " + p.label(y); });
      }
    }
  }
  CheckBuilder dense("dense-image");
  for (const auto& b : c.algebra.elements()) {
    if (b.none()) continue;
    bool hit = false;
    for (const auto& e : c.embedding) hit = hit || e.leq(b);
    dense.expect(hit, b.to_string());
  }
  r.checks = {order.done(), incompat.done(), nonzero.done(), dense.done()};
  r.facts["atoms"] = std::to_string(c.algebra.atom_count());
  return r;
}

AuditResult audit_dense_antichain_facts(const Poset& p) {
  AuditResult r{"dense-antichain-facts", {}, {}};
  CheckBuilder contains("dense-set-contains-maximal-antichain");
  CheckBuilder predense("maximal-antichain-is-predense");
  if (p.size() > 12) fail(ErrorKind::TooManyAtoms, "subset enumeration needs at most 12 points");
  const std::size_t n = p.size();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const Element s = Element::from_mask(n, m);
    if (p.is_dense(s)) {
      const Element a = p.maximal_antichain_within(s);
      contains.expect_lazy(a.leq(s) && p.is_maximal_antichain(a), [&] { return s.to_string(); });
    }
    if (p.is_maximal_antichain(s)) predense.expect_lazy(p.is_predense(s), [&] { return s.to_string(); });
  }
  r.checks = {contains.done(), predense.done()};
  return r;
}

}  // namespace forcing
