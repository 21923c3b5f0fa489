#include "forcing/two_step.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_map>

#include "forcing/errors.hpp"
#include "forcing/sampling.hpp"

namespace forcing {

namespace {

constexpr std::size_t kExhaustiveLimit = 16;

std::vector<Element> cases_for(const FiniteCBA& a, const SamplingOptions& o, std::mt19937_64& rng) {
  return element_domain(a, o.exhaustive && a.atom_count() <= kExhaustiveLimit, rng, o.samples);
}

// Pairs drawn from the case list: all when short, otherwise a sample.
template <class F>
void for_pairs(const std::vector<Element>& xs, std::mt19937_64& rng, F&& f) {
  if (xs.size() <= 64) {
    for (const auto& x : xs) {
      for (const auto& y : xs) f(x, y);
    }
    return;
  }
  for (std::size_t k = 0; k < 4096; ++k) f(xs[rng() % xs.size()], xs[rng() % xs.size()]);
}

std::string pair_string(std::size_t a, std::size_t d) {
  return "(" + std::to_string(a) + "," + std::to_string(d) + ")";
}

std::size_t total_atoms(const AtomwisePresentation& p) {
  if (p.fiber_atoms.size() != p.base.atom_count()) {
    fail(ErrorKind::ArityMismatch, "presentation has " + std::to_string(p.fiber_atoms.size()) + " fibers for " +
                                       std::to_string(p.base.atom_count()) + " base atoms");
  }
  std::size_t total = 0;
  for (std::size_t a = 0; a < p.fiber_atoms.size(); ++a) {
    if (p.fiber_atoms[a] == 0) fail(ErrorKind::EmptyFiber, "fiber over atom " + std::to_string(a) + " has no atoms");
    total += p.fiber_atoms[a];
  }
  if (total > kMaxAtoms) fail(ErrorKind::TooManyAtoms, std::to_string(total) + " atoms in the two-step algebra");
  return total;
}

std::vector<std::size_t> base_map(const AtomwisePresentation& p) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < p.fiber_atoms.size(); ++a) out.insert(out.end(), p.fiber_atoms[a], a);
  return out;
}

void require_regular(const CompleteHom& h, const char* what) {
  if (!h.is_regular()) fail(ErrorKind::NotRegular, std::string(what) + " is not a regular embedding");
}

void require_base_atom(const CompleteHom& h, std::size_t u) {
  if (u >= h.source().atom_count()) {
    fail(ErrorKind::ArityMismatch, "base atom " + std::to_string(u) + " out of range");
  }
}

}  // namespace

TwoStep::TwoStep(const AtomwisePresentation& p)
    : base_(p.base),
      fibers_(p.fiber_atoms),
      algebra_(total_atoms(p)),
      embedding_(p.base, algebra_, base_map(p)) {
  offset_.resize(fibers_.size());
  std::size_t at = 0;
  for (std::size_t a = 0; a < fibers_.size(); ++a) {
    offset_[a] = at;
    at += fibers_[a];
  }
}

std::pair<std::size_t, std::size_t> TwoStep::coords(std::size_t t) const {
  const std::size_t a = embedding_.fiber_map().at(t);
  return {a, t - offset_[a]};
}

Element TwoStep::from_choice(const std::vector<Element>& choice) const {
  if (choice.size() != fibers_.size()) fail(ErrorKind::ArityMismatch, "choice function needs one value per base atom");
  Element out = algebra_.zero();
  for (std::size_t a = 0; a < fibers_.size(); ++a) {
    if (choice[a].size() != fibers_[a]) {
      fail(ErrorKind::MixedAlgebras, "value at base atom " + std::to_string(a) + " is not in its fiber");
    }
    for (auto d : choice[a].atoms()) out.set(offset_[a] + d);
  }
  return out;
}

std::vector<Element> TwoStep::choice(const Element& c) const {
  if (!algebra_.contains(c)) fail(ErrorKind::MixedAlgebras, "element is not in the two-step algebra");
  std::vector<Element> out;
  for (std::size_t a = 0; a < fibers_.size(); ++a) {
    Element e(fibers_[a]);
    for (std::size_t d = 0; d < fibers_[a]; ++d) {
      if (c.test(offset_[a] + d)) e.set(d);
    }
    out.push_back(e);
  }
  return out;
}

Element TwoStep::agree(const Element& c, const Element& e) const {
  const auto x = choice(c), y = choice(e);
  Element out = base_.zero();
  for (std::size_t a = 0; a < fibers_.size(); ++a) {
    if (x[a] == y[a]) out.set(a);
  }
  return out;
}

TwoStep build_two_step(const AtomwisePresentation& p) { return TwoStep(p); }

bool is_maximal_antichain(const FiniteCBA& algebra, const std::vector<Element>& family) {
  Element seen = algebra.zero();
  for (const auto& x : family) {
    if (!algebra.contains(x) || x.none() || !x.disjoint(seen)) return false;
    seen |= x;
  }
  return seen.all();
}

AuditResult two_step_audit(const TwoStep& t, const SamplingOptions& options) {
  AuditResult r;
  r.audit = "two-step";
  std::mt19937_64 rng(options.seed);
  const CompleteHom& i = t.embedding();
  const auto bs = cases_for(t.base(), options, rng);
  const auto cs = cases_for(t.algebra(), options, rng);

  CheckBuilder regular("i is a regular embedding");
  regular.expect(i.is_regular(), "some base atom has an empty fiber");
  r.checks.push_back(regular.done());

  CheckBuilder support("pi(c) = [[c > 0]]");
  for (const auto& c : cs) {
    const auto ch = t.choice(c);
    Element positive = t.base().zero();
    for (std::size_t a = 0; a < ch.size(); ++a) {
      if (ch[a].any()) positive.set(a);
    }
    support.expect_lazy(i.retract(c) == positive, [&] { return "c = " + c.to_string(); });
  }
  r.checks.push_back(support.done());

  CheckBuilder ones("[[d_b = 1]] = b"), zeros("[[d_b = 0]] = ~b"), left_inverse("pi(i(b)) = b");
  for (const auto& b : bs) {
    const Element d = i.apply(b);
    ones.expect_lazy(t.agree(d, t.algebra().one()) == b, [&] { return "b = " + b.to_string(); });
    zeros.expect_lazy(t.agree(d, t.algebra().zero()) == ~b, [&] { return "b = " + b.to_string(); });
    left_inverse.expect_lazy(i.retract(d) == b, [&] { return "b = " + b.to_string(); });
  }
  r.checks.push_back(ones.done());
  r.checks.push_back(zeros.done());
  r.checks.push_back(left_inverse.done());

  if (i.is_regular()) {
    SamplingOptions laws = options;
    laws.exhaustive = options.exhaustive && t.algebra().atom_count() <= 10;
    for (auto c : retraction_laws_audit(i, laws).checks) {
      c.law = "retraction: " + c.law;
      r.checks.push_back(std::move(c));
    }
  }
  r.facts["atoms"] = std::to_string(t.algebra().atom_count());
  return r;
}

QuotientAlgebra quotient_algebra(const CompleteHom& h, std::size_t base_atom) {
  require_regular(h, "the quotient map");
  require_base_atom(h, base_atom);
  return QuotientAlgebra{Relativization(h.target(), h.apply(h.source().atom(base_atom)))};
}

AuditResult quotient_sup_audit(const CompleteHom& h, std::size_t base_atom) {
  const QuotientAlgebra q = quotient_algebra(h, base_atom);
  AuditResult r;
  r.audit = "quotient-sup";
  const FiniteCBA& Q = q.algebra.algebra();
  const FiniteCBA& B = h.source();
  const FiniteCBA& C = h.target();
  std::mt19937_64 rng(base_atom);
  const Element outside = ~q.algebra.support();

  // Representatives differ from the canonical lift by noise the filter ignores.
  auto representative = [&](const Element& cls) { return q.algebra.lift(cls) | (random_element(rng, C.atom_count()) & outside); };

  CheckBuilder sups("[join F] = join of [f] over every family F");
  if (Q.atom_count() <= 4) {
    const auto qs = Q.elements();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << qs.size()); ++mask) {
      Element reps_join = C.zero(), classes_join = Q.zero();
      for (std::size_t k = 0; k < qs.size(); ++k) {
        if (!((mask >> k) & 1U)) continue;
        reps_join |= representative(qs[k]);
        classes_join |= qs[k];
      }
      sups.expect_lazy(q.class_of(reps_join) == classes_join, [&] { return "family mask " + std::to_string(mask); });
    }
  }
  r.checks.push_back(sups.done());

  // [c] = [d] iff c & i(b) = d & i(b) for some b in the generic.
  CheckBuilder classes("[c] = [d] iff they agree on some i(b), b in G");
  if (C.atom_count() <= 8 && B.atom_count() <= 8) {
    const auto cs = C.elements();
    std::vector<Element> generic;
    for (const auto& b : B.elements()) {
      if (b.test(base_atom)) generic.push_back(h.apply(b));
    }
    for (const auto& c : cs) {
      for (const auto& d : cs) {
        bool agree = false;
        for (const auto& g : generic) agree = agree || (c & g) == (d & g);
        classes.expect_lazy((q.class_of(c) == q.class_of(d)) == agree,
                            [&] { return c.to_string() + " vs " + d.to_string(); });
      }
    }
  }
  r.checks.push_back(classes.done());
  r.facts["quotient-atoms"] = std::to_string(Q.atom_count());
  return r;
}

Element canonical_representative(const CompleteHom& h, const std::vector<Element>& antichain,
                                 const std::vector<Element>& reps) {
  require_regular(h, "the embedding");
  if (antichain.size() != reps.size()) fail(ErrorKind::ArityMismatch, "one representative per antichain member");
  if (!is_maximal_antichain(h.source(), antichain)) {
    fail(ErrorKind::NotMaximalAntichain, "index family is not a maximal antichain of the base");
  }
  Element c = h.target().zero();
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (!h.target().contains(reps[k])) fail(ErrorKind::MixedAlgebras, "representative is not in the target");
    c |= h.apply(antichain[k]) & reps[k];
  }
  return c;
}

AuditResult canonical_representative_audit(const CompleteHom& h, const std::vector<Element>& antichain,
                                           const std::vector<Element>& reps) {
  const Element c = canonical_representative(h, antichain, reps);
  AuditResult r;
  r.audit = "canonical-representative";
  const std::size_t n = h.source().atom_count();
  std::vector<Relativization> quotients;
  for (std::size_t u = 0; u < n; ++u) quotients.push_back(quotient_algebra(h, u).algebra);

  CheckBuilder prescribed("[c] = [c_a] below every antichain member a");
  for (std::size_t k = 0; k < antichain.size(); ++k) {
    for (auto u : antichain[k].atoms()) {
      prescribed.expect_lazy(quotients[u].lower(c) == quotients[u].lower(reps[k]),
                             [&] { return "member " + std::to_string(k) + ", atom " + std::to_string(u); });
    }
  }
  r.checks.push_back(prescribed.done());

  auto same_classes = [&](const Element& x) {
    for (std::size_t u = 0; u < n; ++u) {
      if (quotients[u].lower(x) != quotients[u].lower(c)) return false;
    }
    return true;
  };
  CheckBuilder unique("no other element has the same classes");
  if (h.target().atom_count() <= 12) {
    for (const auto& x : h.target().elements()) {
      unique.expect_lazy(!same_classes(x) || x == c, [&] { return "x = " + x.to_string(); });
    }
  } else {
    for (std::size_t t = 0; t < h.target().atom_count(); ++t) {
      Element x = c;
      if (x.test(t)) x.reset(t); else x.set(t);
      unique.expect_lazy(!same_classes(x), [&] { return "flipping atom " + std::to_string(t); });
    }
  }
  r.checks.push_back(unique.done());
  r.facts["representative"] = c.to_string();
  return r;
}

TwoStepIso two_step_iso(const CompleteHom& h) {
  require_regular(h, "the embedding");
  const std::size_t n = h.source().atom_count();
  AtomwisePresentation p{h.source(), {}};
  for (std::size_t a = 0; a < n; ++a) p.fiber_atoms.push_back(h.fiber(a).count());
  TwoStep t(p);
  std::vector<std::size_t> rank(n, 0), to_pair(h.target().atom_count());
  for (std::size_t s = 0; s < to_pair.size(); ++s) {
    const std::size_t a = h.fiber_map()[s];
    to_pair[s] = t.atom_of(a, rank[a]++);
  }
  CompleteHom to_target(t.algebra(), h.target(), std::move(to_pair));
  return TwoStepIso{std::move(t), std::move(to_target)};
}

AuditResult two_step_iso_audit(const CompleteHom& h, const SamplingOptions& options) {
  const TwoStepIso iso = two_step_iso(h);
  const TwoStep& t = iso.two_step;
  const std::size_t n = h.source().atom_count();
  AuditResult r;
  r.audit = "two-step-iso";
  std::mt19937_64 rng(options.seed);

  std::vector<Relativization> quotients;
  for (std::size_t u = 0; u < n; ++u) quotients.push_back(quotient_algebra(h, u).algebra);
  // c |-> its family of classes, read as an element of B * (C/G).
  std::unordered_map<Element, Element, ElementHash> memo;
  auto classes = [&](const Element& c) {
    if (auto it = memo.find(c); it != memo.end()) return it->second;
    std::vector<Element> ch;
    for (std::size_t u = 0; u < n; ++u) ch.push_back(quotients[u].lower(c));
    return memo.emplace(c, t.from_choice(ch)).first->second;
  };
  // back again through the canonical representative over the atoms
  std::vector<Element> atoms;
  for (std::size_t u = 0; u < n; ++u) atoms.push_back(h.source().atom(u));
  auto back = [&](const Element& x) {
    const auto ch = t.choice(x);
    std::vector<Element> reps;
    for (std::size_t u = 0; u < n; ++u) reps.push_back(quotients[u].lift(ch[u]));
    return canonical_representative(h, atoms, reps);
  };

  const auto cs = cases_for(h.target(), options, rng);
  const auto xs = cases_for(t.algebra(), options, rng);
  const auto bs = cases_for(h.source(), options, rng);

  CheckBuilder sizes("both algebras have the same atoms");
  sizes.expect(t.algebra().atom_count() == h.target().atom_count());
  r.checks.push_back(sizes.done());

  CheckBuilder matches("the class map is the atom relabeling");
  CheckBuilder inverse_left("back(classes(c)) = c"), inverse_right("classes(back(x)) = x");
  for (const auto& c : cs) {
    const Element x = classes(c);
    matches.expect_lazy(iso.to_target.apply(x) == c, [&] { return "c = " + c.to_string(); });
    inverse_left.expect_lazy(back(x) == c, [&] { return "c = " + c.to_string(); });
  }
  for (const auto& x : xs) {
    inverse_right.expect_lazy(classes(back(x)) == x, [&] { return "x = " + x.to_string(); });
  }
  r.checks.push_back(matches.done());
  r.checks.push_back(inverse_left.done());
  r.checks.push_back(inverse_right.done());

  CheckBuilder joins("preserves joins"), complements("preserves complements");
  for_pairs(cs, rng, [&](const Element& c, const Element& d) {
    joins.expect_lazy(classes(c | d) == (classes(c) | classes(d)),
                      [&] { return c.to_string() + " | " + d.to_string(); });
  });
  for (const auto& c : cs) {
    complements.expect_lazy(classes(~c) == ~classes(c), [&] { return "c = " + c.to_string(); });
  }
  r.checks.push_back(joins.done());
  r.checks.push_back(complements.done());

  CheckBuilder embeds("classes(i(b)) = i*(b)"), retracts("pi*(classes(c)) = pi(c)");
  for (const auto& b : bs) {
    embeds.expect_lazy(classes(h.apply(b)) == t.embedding().apply(b), [&] { return "b = " + b.to_string(); });
  }
  for (const auto& c : cs) {
    retracts.expect_lazy(t.embedding().retract(classes(c)) == h.retract(c), [&] { return "c = " + c.to_string(); });
  }
  r.checks.push_back(embeds.done());
  r.checks.push_back(retracts.done());

  r.facts["atoms"] = std::to_string(h.target().atom_count());
  if (h.target().atom_count() <= 16) {
    std::vector<std::string> matched(h.target().atom_count());
    for (std::size_t s = 0; s < matched.size(); ++s) {
      const auto [a, d] = t.coords(iso.to_target.fiber_map()[s]);
      matched[s] = pair_string(a, d);
    }
    std::string m;
    for (std::size_t s = 0; s < matched.size(); ++s) m += (s ? " " : "") + std::to_string(s) + "->" + matched[s];
    r.facts["atom-matching"] = m;
  }
  return r;
}

Triangle make_triangle(CompleteHom i0, CompleteHom i1, CompleteHom j) {
  if (!(i0.target() == j.source()) || !(i1.target() == j.target()) || !(i0.source() == i1.source())) {
    fail(ErrorKind::MixedAlgebras, "triangle maps do not line up");
  }
  if (!(i0.then(j) == i1)) fail(ErrorKind::NonCommuting, "j after i0 differs from i1");
  return Triangle{std::move(i0), std::move(i1), std::move(j)};
}

QuotientHom quotient_hom(const Triangle& t, std::size_t base_atom) {
  require_regular(t.i0, "i0");
  require_regular(t.i1, "i1");
  require_regular(t.j, "j");
  if (!(t.i0.then(t.j) == t.i1)) fail(ErrorKind::NonCommuting, "j after i0 differs from i1");
  require_base_atom(t.i0, base_atom);
  const Element u = t.i0.source().atom(base_atom);
  Relativization source(t.i0.target(), t.i0.apply(u));
  Relativization target(t.i1.target(), t.i1.apply(u));
  std::vector<std::size_t> f(target.algebra().atom_count());
  for (std::size_t s = 0; s < f.size(); ++s) f[s] = source.local_atom(t.j.fiber_map()[target.parent_atom(s)]);
  CompleteHom hom(source.algebra(), target.algebra(), std::move(f));
  return QuotientHom{std::move(source), std::move(target), std::move(hom)};
}

AuditResult quotient_hom_audit(const Triangle& t, const SamplingOptions& options) {
  AuditResult r;
  r.audit = "quotient-hom";
  std::mt19937_64 rng(options.seed);
  const auto c0s = cases_for(t.j.source(), options, rng);
  const auto c1s = cases_for(t.j.target(), options, rng);
  CheckBuilder defined("[c] = [d] implies [j(c)] = [j(d)]"), action("j/G([c]) = [j(c)]");
  CheckBuilder regular("j/G is injective"), joins("j/G preserves joins and 0");
  CheckBuilder retraction("pi_{j/G}([c]) = [pi_j(c)]");
  for (std::size_t u = 0; u < t.i0.source().atom_count(); ++u) {
    const QuotientHom q = quotient_hom(t, u);
    const std::string at = "atom " + std::to_string(u) + ", ";
    // [c] = [d] iff c ^ d is in the dual ideal
    for (const auto& x : c0s) {
      if ((x & q.source.support()).any()) continue;
      defined.expect_lazy((t.j.apply(x) & q.target.support()).none(), [&] { return at + "c ^ d = " + x.to_string(); });
    }
    for (const auto& c : c0s) {
      action.expect_lazy(q.hom.apply(q.source.lower(c)) == q.target.lower(t.j.apply(c)),
                         [&] { return at + "c = " + c.to_string(); });
      regular.expect_lazy(q.source.lower(c).none() || q.target.lower(t.j.apply(c)).any(),
                          [&] { return at + "c = " + c.to_string(); });
    }
    regular.expect(q.hom.is_regular(), at + "some quotient atom has an empty fiber");
    const auto qs = cases_for(q.source.algebra(), options, rng);
    joins.expect(q.hom.apply(q.source.algebra().zero()).none(), at + "0 not sent to 0");
    for_pairs(qs, rng, [&](const Element& x, const Element& y) {
      joins.expect_lazy(q.hom.apply(x | y) == (q.hom.apply(x) | q.hom.apply(y)),
                        [&] { return at + x.to_string() + " | " + y.to_string(); });
    });
    for (const auto& c : c1s) {
      retraction.expect_lazy(q.hom.retract(q.target.lower(c)) == q.source.lower(t.j.retract(c)),
                             [&] { return at + "c = " + c.to_string(); });
    }
  }
  for (auto* b : {&defined, &action, &regular, &joins, &retraction}) r.checks.push_back(b->done());
  return r;
}

LiftedEmbedding lift_embedding_name(const FiniteCBA& base, const std::vector<CompleteHom>& fiberwise) {
  if (fiberwise.size() != base.atom_count()) fail(ErrorKind::ArityMismatch, "one embedding per base atom");
  AtomwisePresentation lo{base, {}}, hi{base, {}};
  for (std::size_t a = 0; a < fiberwise.size(); ++a) {
    if (!fiberwise[a].is_regular()) fail(ErrorKind::FiberNotRegular, "k at base atom " + std::to_string(a));
    lo.fiber_atoms.push_back(fiberwise[a].source().atom_count());
    hi.fiber_atoms.push_back(fiberwise[a].target().atom_count());
  }
  TwoStep lower(lo), upper(hi);
  std::vector<std::size_t> f(upper.algebra().atom_count());
  for (std::size_t s = 0; s < f.size(); ++s) {
    const auto [a, e] = upper.coords(s);
    f[s] = lower.atom_of(a, fiberwise[a].fiber_map()[e]);
  }
  CompleteHom hom(lower.algebra(), upper.algebra(), std::move(f));
  return LiftedEmbedding{std::move(lower), std::move(upper), std::move(hom)};
}

AuditResult lift_embedding_audit(const LiftedEmbedding& l, const std::vector<CompleteHom>& fiberwise) {
  AuditResult r;
  r.audit = "lift-embedding";
  CheckBuilder regular("the lift is regular"), commutes("the lift commutes with the base embeddings");
  CheckBuilder recovers("the quotient at a is k_a");
  regular.expect(l.hom.is_regular());
  commutes.expect(l.lower.embedding().then(l.hom) == l.upper.embedding());
  if (regular.passed() && commutes.passed()) {
    const Triangle t{l.lower.embedding(), l.upper.embedding(), l.hom};
    for (std::size_t a = 0; a < fiberwise.size(); ++a) {
      const QuotientHom q = quotient_hom(t, a);
      recovers.expect(q.hom.fiber_map() == fiberwise[a].fiber_map(), "base atom " + std::to_string(a));
    }
  }
  r.checks.push_back(regular.done());
  r.checks.push_back(commutes.done());
  r.checks.push_back(recovers.done());
  return r;
}

AuditResult three_step_assoc_audit(const ThreeStepTower& tower, const SamplingOptions& options) {
  const std::size_t n = tower.base.atom_count();
  if (tower.mid.size() != n || tower.top.size() != n) fail(ErrorKind::ShapeMismatch, "tower levels do not match the base");
  std::vector<std::size_t> flat;
  for (std::size_t a = 0; a < n; ++a) {
    if (tower.top[a].size() != tower.mid[a]) {
      fail(ErrorKind::ShapeMismatch, "top level over base atom " + std::to_string(a) + " has the wrong length");
    }
    flat.insert(flat.end(), tower.top[a].begin(), tower.top[a].end());
  }
  const TwoStep d1({tower.base, tower.mid});
  const TwoStep d2({d1.algebra(), flat});
  const Triangle t = make_triangle(d1.embedding(), d1.embedding().then(d2.embedding()), d2.embedding());

  AuditResult r;
  r.audit = "three-step";
  std::mt19937_64 rng(options.seed);
  const auto mids = cases_for(d1.algebra(), options, rng);
  const auto tops = cases_for(d2.algebra(), options, rng);
  CheckBuilder composed("H = {c : [c]_G in K} is the ultrafilter at (a,d)");
  CheckBuilder sizes("(D/G)/K and D/H have the same atoms");
  CheckBuilder agree("[[c]_G]_K and [c]_H pick out the same atoms");
  CheckBuilder complements("the identification preserves complements");
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const QuotientHom g = quotient_hom(t, a);
    for (std::size_t d = 0; d < tower.mid[a]; ++d) {
      ++pairs;
      const std::string at = pair_string(a, d) + ", ";
      const std::size_t h_atom = d1.atom_of(a, d);
      const std::size_t k_local = g.source.local_atom(h_atom);
      for (const auto& c : mids) {
        composed.expect_lazy(g.source.lower(c).test(k_local) == c.test(h_atom), [&] { return at + "c = " + c.to_string(); });
      }
      const Relativization k(g.target.algebra(), g.hom.apply(g.source.algebra().atom(k_local)));
      const Element h_support = d2.embedding().apply(d1.algebra().atom(h_atom));
      sizes.expect(k.algebra().atom_count() == h_support.count(), at + "sizes differ");
      auto twice = [&](const Element& c) { return g.target.lift(k.lift(k.lower(g.target.lower(c)))); };
      for (const auto& c : tops) {
        const Element via = twice(c);
        agree.expect_lazy(via == (c & h_support), [&] { return at + "c = " + c.to_string(); });
        complements.expect_lazy(twice(~c) == h_support.minus(via), [&] { return at + "c = " + c.to_string(); });
      }
    }
  }
  for (auto* b : {&composed, &sizes, &agree, &complements}) r.checks.push_back(b->done());
  r.facts["atoms"] = std::to_string(d2.algebra().atom_count());
  r.facts["ultrafilter-pairs"] = std::to_string(pairs);
  return r;
}

}  // namespace forcing
