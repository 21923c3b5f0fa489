#include "forcing/morphisms.hpp"

#include <random>

#include "forcing/errors.hpp"
#include "forcing/sampling.hpp"

namespace forcing {

CompleteHom::CompleteHom(const FiniteCBA& source, const FiniteCBA& target, std::vector<std::size_t> fiber_map)
    : source_(source), target_(target), fiber_map_(std::move(fiber_map)) {
  if (fiber_map_.size() != target_.atom_count()) {
    fail(ErrorKind::ArityMismatch, "fiber map has " + std::to_string(fiber_map_.size()) + " entries for " +
                                       std::to_string(target_.atom_count()) + " target atoms");
  }
  fibers_.assign(source_.atom_count(), target_.zero());
  for (std::size_t t = 0; t < fiber_map_.size(); ++t) {
    if (fiber_map_[t] >= source_.atom_count()) {
      fail(ErrorKind::ArityMismatch, "fiber map sends atom " + std::to_string(t) + " to " +
                                         std::to_string(fiber_map_[t]) + ", source has " +
                                         std::to_string(source_.atom_count()) + " atoms");
    }
    fibers_[fiber_map_[t]].set(t);
  }
}

CompleteHom CompleteHom::identity(const FiniteCBA& algebra) {
  std::vector<std::size_t> m(algebra.atom_count());
  for (std::size_t t = 0; t < m.size(); ++t) m[t] = t;
  return CompleteHom(algebra, algebra, std::move(m));
}

Element CompleteHom::apply(const Element& b) const {
  if (!source_.contains(b)) fail(ErrorKind::MixedAlgebras, "argument is not in the source algebra");
  Element out = target_.zero();
  for (auto a : b.atoms()) out |= fibers_[a];
  return out;
}

Element CompleteHom::retract(const Element& c) const {
  if (!target_.contains(c)) fail(ErrorKind::MixedAlgebras, "argument is not in the target algebra");
  Element out = source_.zero();
  for (auto t : c.atoms()) out.set(fiber_map_[t]);
  return out;
}

bool CompleteHom::is_regular() const {
  for (const auto& f : fibers_) {
    if (f.none()) return false;
  }
  return true;
}

bool CompleteHom::is_surjective() const {
  for (const auto& f : fibers_) {
    if (f.count() > 1) return false;
  }
  return true;
}

CompleteHom CompleteHom::then(const CompleteHom& next) const {
  if (!(next.source_ == target_)) fail(ErrorKind::MixedAlgebras, "composition of non-adjacent homomorphisms");
  std::vector<std::size_t> m(next.target_.atom_count());
  for (std::size_t t = 0; t < m.size(); ++t) m[t] = fiber_map_[next.fiber_map_[t]];
  return CompleteHom(source_, next.target_, std::move(m));
}

CompleteHom hom_from_fiber_map(const FiniteCBA& source, const FiniteCBA& target, std::vector<std::size_t> fiber_map) {
  return CompleteHom(source, target, std::move(fiber_map));
}

RestrictedHom restrict(const CompleteHom& h, const Element& c) {
  if (c.none()) fail(ErrorKind::ZeroRestriction, "restriction below 0");
  Relativization src(h.source(), h.retract(c));
  Relativization tgt(h.target(), c);
  std::vector<std::size_t> m(tgt.algebra().atom_count());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = src.local_atom(h.fiber_map()[tgt.parent_atom(k)]);
  CompleteHom hom(src.algebra(), tgt.algebra(), std::move(m));
  return {std::move(src), std::move(tgt), std::move(hom)};
}

KerCoker ker_coker(const CompleteHom& h) {
  Element coker = h.source().zero();
  for (auto s : h.fiber_map()) coker.set(s);
  Relativization src(h.source(), coker);
  Relativization tgt(h.target(), h.target().one());
  std::vector<std::size_t> m(h.target().atom_count());
  for (std::size_t t = 0; t < m.size(); ++t) m[t] = src.local_atom(h.fiber_map()[t]);
  CompleteHom hom(src.algebra(), tgt.algebra(), std::move(m));
  return {~coker, coker, {std::move(src), std::move(tgt), std::move(hom)}};
}

StoneDual stone_dual_quotient(const CompleteHom& h) {
  StoneDual d{h.fiber_map(), {}};
  for (std::size_t a = 0; a < h.source().atom_count(); ++a) d.cells.push_back(h.fiber(a));
  return d;
}

bool is_predense(const FiniteCBA& algebra, const std::vector<Element>& family) {
  // Checking the atoms suffices: a nonzero x meets d iff some atom of x does.
  for (std::size_t t = 0; t < algebra.atom_count(); ++t) {
    bool hit = false;
    for (const auto& d : family) hit = hit || d.test(t);
    if (!hit) return false;
  }
  return true;
}


AuditResult retraction_laws_audit(const CompleteHom& h, const SamplingOptions& options) {
  if (!h.is_regular()) fail(ErrorKind::NotRegular, "retraction laws need an injective homomorphism");
  const FiniteCBA& B = h.source();
  const FiniteCBA& C = h.target();
  std::mt19937_64 rng(options.seed);
  const bool small_source = options.exhaustive || B.atom_count() <= 10;
  const std::vector<Element> bs = element_domain(B, small_source, rng, options.samples);
  const std::vector<Element> cs = element_domain(C, options.exhaustive, rng, options.samples);
  auto pi = [&](const Element& c) { return h.retract(c); };
  auto i = [&](const Element& b) { return h.apply(b); };

  AuditResult r{"retraction-laws", {}, {}};

  CheckBuilder pi_i("pi(i(b)) = b");
  for (const auto& b : bs) pi_i.expect_lazy(pi(i(b)) == b, [&] { return b.to_string(); });

  CheckBuilder above("c <= i(pi(c))");
  CheckBuilder positive("pi(c) = 0 iff c = 0");
  CheckBuilder by_def("pi(c) = meet{b : c <= i(b)}");
  for (const auto& c : cs) {
    above.expect_lazy(c.leq(i(pi(c))), [&] { return c.to_string(); });
    positive.expect_lazy(pi(c).none() == c.none(), [&] { return c.to_string(); });
    if (small_source) {
      Element inf = B.one();
      for (const auto& b : bs) {
        if (c.leq(i(b))) inf &= b;
      }
      by_def.expect_lazy(inf == pi(c), [&] { return c.to_string(); });
    }
  }

  CheckBuilder joins("pi preserves joins");
  CheckBuilder meets_le("pi(c & d) <= pi(c) & pi(d)");
  CheckBuilder module("pi(c & i(b)) = pi(c) & b");
  joins.expect(pi(C.zero()).none(), "empty join");
  for (std::size_t x = 0; x < cs.size(); ++x) {
    const Element& c = cs[x];
    for (std::size_t y = x; y < cs.size(); ++y) {
      const Element& d = cs[y];
      joins.expect_lazy(pi(c | d) == (pi(c) | pi(d)), [&] { return c.to_string() + ", " + d.to_string(); });
      meets_le.expect_lazy(pi(c & d).leq(pi(c) & pi(d)), [&] { return c.to_string() + ", " + d.to_string(); });
    }
    for (const auto& b : bs) {
      module.expect_lazy(pi(c & i(b)) == (pi(c) & b), [&] { return c.to_string() + ", " + b.to_string(); });
    }
  }
  // Joins of larger families, drawn from the quantified elements.
  for (std::size_t k = 0; k < 64; ++k) {
    std::vector<Element> fam;
    Element j = C.zero(), pj = B.zero();
    for (const auto& c : cs) {
      if (rng() % 3 == 0) {
        fam.push_back(c);
        j |= c;
        pj |= pi(c);
      }
    }
    joins.expect_lazy(pi(j) == pj, [&] { return "family of " + std::to_string(fam.size()); });
  }

  CheckBuilder i_by_def("i(b) = join{c : pi(c) <= b}");
  for (const auto& b : bs) {
    Element j = C.zero();
    if (options.exhaustive) {
      for (const auto& c : cs) {
        if (pi(c).leq(b)) j |= c;
      }
    } else {
      // The largest such c is the join of the qualifying atoms; sampled c
      // must lie under it.
      for (std::size_t t = 0; t < C.atom_count(); ++t) {
        if (pi(C.atom(t)).leq(b)) j.set(t);
      }
      for (const auto& c : cs) {
        if (pi(c).leq(b)) i_by_def.expect_lazy(c.leq(i(b)), [&] { return c.to_string(); });
      }
    }
    i_by_def.expect_lazy(j == i(b), [&] { return b.to_string(); });
  }

  // pi is not a homomorphism unless i is onto: the standard witness.
  CheckBuilder meet_witness("meet failure when i is not onto");
  if (h.is_surjective()) {
    for (const auto& c : cs) {
      for (const auto& d : cs) {
        meet_witness.expect_lazy(pi(c & d) == (pi(c) & pi(d)), [&] { return c.to_string() + ", " + d.to_string(); });
      }
    }
    r.facts["meet-witness"] = "none (i is an isomorphism)";
  } else {
    std::size_t t = 0;
    while (h.fiber(h.fiber_map()[t]).count() < 2) ++t;
    const Element c = C.atom(t);
    const Element d = i(pi(c)) & ~c;
    const bool strict = pi(d & c).none() && (pi(d) & pi(c)).any();
    meet_witness.expect(strict, c.to_string());
    r.facts["meet-witness"] = "pi(" + d.to_string() + " & " + c.to_string() + ") = " + pi(d & c).to_string() +
                              " < " + (pi(d) & pi(c)).to_string();
  }

  CheckBuilder predense_up("i maps predense sets to predense sets");
  CheckBuilder predense_down("pi maps predense sets to predense sets");
  auto image = [](const std::vector<Element>& fam, auto&& f) {
    std::vector<Element> out;
    for (const auto& x : fam) out.push_back(f(x));
    return out;
  };
  if (B.atom_count() <= 3 && options.exhaustive) {
    const auto all = B.elements();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << all.size()); ++m) {
      std::vector<Element> fam;
      for (std::size_t k = 0; k < all.size(); ++k) {
        if ((m >> k) & 1U) fam.push_back(all[k]);
      }
      if (is_predense(B, fam)) {
        predense_up.expect_lazy(is_predense(C, image(fam, i)), [&] { return std::to_string(m); });
      }
    }
  } else {
    for (std::size_t k = 0; k < 64; ++k) {
      std::vector<Element> fam{random_element(rng, B.atom_count()), random_element(rng, B.atom_count())};
      fam.push_back(~fam[0] | ~fam[1]);
      if (is_predense(B, fam)) predense_up.expect(is_predense(C, image(fam, i)), "sampled family");
    }
  }
  for (std::size_t x = 0; x < cs.size(); ++x) {
    for (std::size_t y = x; y < cs.size(); ++y) {
      const std::vector<Element> fam{cs[x], cs[y]};
      if (is_predense(C, fam)) {
        predense_down.expect_lazy(is_predense(B, image(fam, pi)),
                                  [&] { return cs[x].to_string() + ", " + cs[y].to_string(); });
      }
    }
  }

  CheckBuilder generic_pre("i^-1[U] is the ultrafilter over U's atom");
  CheckBuilder generic_img("pi[U] is the ultrafilter over U's atom");
  CheckBuilder stone("pi*[N_c] = N_pi(c)");
  for (std::size_t t = 0; t < C.atom_count(); ++t) {
    const std::size_t s = h.fiber_map()[t];
    for (const auto& b : bs) {
      generic_pre.expect_lazy(i(b).test(t) == b.test(s), [&] { return "U_" + std::to_string(t) + ", " + b.to_string(); });
    }
    // Every b in U_s is pi of some c in U_t, namely c = {t} | i(b); and no
    // c in U_t goes outside U_s.
    for (const auto& b : bs) {
      if (b.test(s)) {
        generic_img.expect_lazy(pi(C.atom(t) | i(b)) == b, [&] { return b.to_string(); });
      }
    }
    for (const auto& c : cs) {
      if (c.test(t)) generic_img.expect_lazy(pi(c).test(s), [&] { return c.to_string(); });
    }
  }
  const StoneDual dual = stone_dual_quotient(h);
  for (const auto& c : cs) {
    Element img = B.zero();
    for (auto t : c.atoms()) img.set(dual.point_map[t]);
    stone.expect_lazy(img == pi(c), [&] { return c.to_string(); });
  }

  CheckBuilder filters("pi[up(c)] = up(pi(c))");
  for (const auto& c : cs) {
    // every e >= c has pi(e) >= pi(c); every b >= pi(c) is reached by c | i(b)
    for (const auto& e : cs) {
      if (c.leq(e)) filters.expect_lazy(pi(c).leq(pi(e)), [&] { return c.to_string(); });
    }
    for (const auto& b : bs) {
      if (pi(c).leq(b)) filters.expect_lazy(pi(c | i(b)) == b, [&] { return c.to_string() + ", " + b.to_string(); });
    }
  }

  CheckBuilder restriction("restriction commutes with pi and composes");
  std::size_t budget = 12;
  for (const auto& c : cs) {
    if (c.none() || budget == 0) continue;
    --budget;
    const RestrictedHom rc = restrict(h, c);
    bool ok = rc.hom.is_regular();
    for (std::size_t t = 0; t < rc.target.algebra().atom_count() && ok; ++t) {
      const Element d = rc.target.algebra().atom(t) | rc.target.lower(c & cs[t % cs.size()]);
      ok = rc.source.lift(rc.hom.retract(d)) == pi(rc.target.lift(d));
      // restricting again below d matches restricting h below d directly
      const RestrictedHom twice = restrict(rc.hom, d);
      const RestrictedHom once = restrict(h, rc.target.lift(d));
      ok = ok && twice.hom.fiber_map() == once.hom.fiber_map();
    }
    restriction.expect(ok, c.to_string());
  }

  r.checks = {pi_i.done(),      above.done(),        positive.done(),     by_def.done(),     joins.done(),
              meets_le.done(),  module.done(),       i_by_def.done(),     meet_witness.done(), predense_up.done(),
              predense_down.done(), generic_pre.done(), generic_img.done(), stone.done(),      filters.done(),
              restriction.done()};
  r.facts["mode"] = options.exhaustive ? "exhaustive" : "sampled";
  return r;
}

AuditResult join_completeness_audit(const FiniteCBA& source, const FiniteCBA& target,
                                    const std::vector<Element>& table) {
  if (source.atom_count() > 4) fail(ErrorKind::TooManyAtoms, "join-completeness audit needs <= 4 source atoms");
  const auto all = source.elements();
  if (table.size() != all.size()) fail(ErrorKind::ArityMismatch, "table must list one image per source element");
  auto img = [&](const Element& b) { return table[b.low_word()]; };

  AuditResult r{"join-completeness", {}, {}};
  bool complete = true;
  std::string bad_family;
  Element lhs, rhs;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << all.size()) && complete; ++m) {
    Element j = source.zero(), ij = target.zero();
    for (std::size_t k = 0; k < all.size(); ++k) {
      if ((m >> k) & 1U) {
        j |= all[k];
        ij |= img(all[k]);
      }
    }
    if (img(j) != ij) {
      complete = false;
      bad_family = std::to_string(m);
      lhs = img(j);
      rhs = ij;
    }
  }

  auto preimage_is_ultrafilter = [&](std::size_t t) {
    // a principal ultrafilter at some atom of the source
    for (std::size_t a = 0; a < source.atom_count(); ++a) {
      bool same = true;
      for (const auto& b : all) same = same && (img(b).test(t) == b.test(a));
      if (same) return true;
    }
    return false;
  };
  bool generic = true;
  std::size_t bad_atom = target.atom_count();
  for (std::size_t t = 0; t < target.atom_count(); ++t) {
    if (!preimage_is_ultrafilter(t)) {
      generic = false;
      bad_atom = t;
      break;
    }
  }

  bool hom = true;
  for (const auto& x : all) {
    hom = hom && img(~x) == ~img(x);
    for (const auto& y : all) hom = hom && img(x & y) == (img(x) & img(y));
  }
  CheckBuilder agree("homomorphisms pull ultrafilters back to ultrafilters");
  if (hom) agree.expect(complete && generic, "complete=" + std::to_string(complete) + " generic=" + std::to_string(generic));
  CheckBuilder witness("failing join yields a violating ultrafilter");
  if (!complete) {
    // an atom of i(join A) - join i[A], or of the reverse difference
    const Element d = (lhs & ~rhs).any() ? (lhs & ~rhs) : (rhs & ~lhs);
    witness.expect(!preimage_is_ultrafilter(d.first()), "U_" + std::to_string(d.first()));
    r.facts["violating-ultrafilter"] = "U_" + std::to_string(d.first());
    r.facts["failing-family"] = bad_family;
  }
  r.facts["homomorphism"] = hom ? "yes" : "no";
  r.facts["join-complete"] = complete ? "yes" : "no";
  r.facts["generic-preimages"] = generic ? "yes" : "no";
  if (bad_atom < target.atom_count()) r.facts["first-bad-preimage"] = "U_" + std::to_string(bad_atom);
  r.checks = {agree.done(), witness.done()};
  return r;
}

}  // namespace forcing
