#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "forcing/bvm.hpp"
#include "forcing/errors.hpp"
#include "forcing/two_step.hpp"

using namespace forcing;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ValidationError;
}

// Doubles every atom: atom t of the target lies over t / 2.
CompleteHom doubling(std::size_t n) {
  std::vector<std::size_t> f;
  for (std::size_t t = 0; t < 2 * n; ++t) f.push_back(t / 2);
  return hom_from_fiber_map(FiniteCBA(n), FiniteCBA(2 * n), f);
}

// Every way to write `total` as an ordered sum of `parts` positive numbers.
void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& cur,
                  const std::function<void(const std::vector<std::size_t>&)>& out) {
  if (parts == 0) {
    if (total == 0) out(cur);
    return;
  }
  for (std::size_t k = 1; k + parts - 1 <= total; ++k) {
    cur.push_back(k);
    compositions(parts - 1, total - k, cur, out);
    cur.pop_back();
  }
}

// Classes in C of the quotient by the filter generated by i[G], straight from
// the definition.
bool same_class(const CompleteHom& i, std::size_t u, const Element& c, const Element& d) {
  for (const auto& b : i.source().elements()) {
    if (b.test(u) && (c & i.apply(b)) == (d & i.apply(b))) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("two-step algebra from an atomwise presentation") {
  const TwoStep t = build_two_step({FiniteCBA(2), {2, 1}});
  CHECK(t.algebra().atom_count() == 3);
  CHECK(t.embedding().apply(Element::of(2, {0})) == Element::of(3, {t.atom_of(0, 0), t.atom_of(0, 1)}));
  CHECK(t.coords(2) == std::pair<std::size_t, std::size_t>{1, 0});
  const Element c = t.from_choice({Element(2), Element::full(1)});
  CHECK(t.embedding().retract(c) == Element::of(2, {1}));
  CHECK(two_step_audit(t).passed());

  const TwoStep trivial = build_two_step({FiniteCBA(3), {1, 1, 1}});
  CHECK(trivial.algebra().atom_count() == 3);
  CHECK(trivial.embedding().is_surjective());

  CHECK(kind_of([] { build_two_step({FiniteCBA(2), {2, 0}}); }) == ErrorKind::EmptyFiber);
  CHECK(kind_of([] { build_two_step({FiniteCBA(2), {2}}); }) == ErrorKind::ArityMismatch);
  CHECK(kind_of([&] { t.from_choice({Element(2), Element(2)}); }) == ErrorKind::MixedAlgebras);
}

TEST_CASE("d_b as a mixed name decides like the atomwise element") {
  // d_b is 1 below b and 0 below ~b; as a name, the mix of the check names of
  // 1 = {0} and 0 = {}.
  FiniteCBA b3(3);
  const BName one = BName::check(HFSet::of({HFSet()}), 3), zero = BName::check(HFSet(), 3);
  const TwoStep t = build_two_step({b3, {1, 2, 1}});
  for (const auto& b : b3.elements()) {
    if (b.none() || b.all()) continue;
    const BName d = mix({b, ~b}, {one, zero});
    const NameEnv env{{"d", d}, {"one", one}, {"zero", zero}};
    CHECK(truth_value(Formula::parse("d = one"), env, 3) == t.agree(t.embedding().apply(b), t.algebra().one()));
    CHECK(truth_value(Formula::parse("d = zero"), env, 3) == t.agree(t.embedding().apply(b), t.algebra().zero()));
  }
}

TEST_CASE("antichain correspondence, exhaustive on small presentations") {
  std::size_t families = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::uint64_t shape = 0; shape < (std::uint64_t{1} << n); ++shape) {
      AtomwisePresentation p{FiniteCBA(n), {}};
      for (std::size_t a = 0; a < n; ++a) p.fiber_atoms.push_back(1 + ((shape >> a) & 1U));
      const TwoStep t(p);
      std::vector<Element> nonzero;
      for (const auto& x : t.algebra().elements()) {
        if (x.any()) nonzero.push_back(x);
      }
      // families of one to three distinct nonzero elements
      auto check = [&](const std::vector<Element>& fam) {
        bool atomwise = true;
        for (std::size_t a = 0; a < n; ++a) {
          Element seen(p.fiber_atoms[a]);
          for (const auto& c : fam) {
            const Element v = t.choice(c)[a];
            atomwise = atomwise && v.disjoint(seen);
            seen |= v;
          }
          atomwise = atomwise && seen.all();
        }
        CHECK(is_maximal_antichain(t.algebra(), fam) == atomwise);
        ++families;
      };
      for (std::size_t i = 0; i < nonzero.size(); ++i) {
        check({nonzero[i]});
        for (std::size_t j = i + 1; j < nonzero.size(); ++j) {
          check({nonzero[i], nonzero[j]});
          for (std::size_t k = j + 1; k < nonzero.size(); ++k) check({nonzero[i], nonzero[j], nonzero[k]});
        }
      }
    }
  }
  CHECK(families > 0);
}

TEST_CASE("generic quotients") {
  FiniteCBA b2(2), c4(4);
  const auto h = hom_from_fiber_map(b2, c4, {0, 0, 1, 1});
  CHECK(quotient_algebra(h, 0).algebra.support() == c4.element({0, 1}));
  CHECK(quotient_algebra(CompleteHom::identity(c4), 2).algebra.algebra().atom_count() == 1);
  CHECK(kind_of([&] { quotient_algebra(hom_from_fiber_map(b2, c4, {0, 0, 0, 0}), 0); }) == ErrorKind::NotRegular);

  // the class map against the filter generated by i[G]
  const QuotientAlgebra q = quotient_algebra(h, 0);
  for (const auto& c : c4.elements()) {
    for (const auto& d : c4.elements()) {
      CHECK((q.class_of(c) == q.class_of(d)) == same_class(h, 0, c, d));
      CHECK((q.class_of(c) == q.class_of(d)) == (c ^ d).disjoint(h.apply(b2.atom(0))));
    }
  }
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    FiniteCBA b(1 + rng() % 3);
    std::vector<std::size_t> f;
    for (std::size_t a = 0; a < b.atom_count(); ++a) f.push_back(a);
    while (f.size() < b.atom_count() + rng() % 5) f.push_back(rng() % b.atom_count());
    const auto g = hom_from_fiber_map(b, FiniteCBA(f.size()), f);
    for (std::size_t u = 0; u < b.atom_count(); ++u) {
      const auto r = quotient_sup_audit(g, u);
      CHECK_MESSAGE(r.passed(), r.summary());
    }
  }
}

TEST_CASE("canonical representatives") {
  FiniteCBA b2(2), c4(4);
  const auto h = hom_from_fiber_map(b2, c4, {0, 0, 1, 1});
  const std::vector<Element> atoms{b2.atom(0), b2.atom(1)};
  CHECK(canonical_representative(h, atoms, {c4.element({0}), c4.element({3})}) == c4.element({0, 3}));
  const auto r = canonical_representative_audit(h, atoms, {c4.element({0, 2}), c4.element({3})});
  CHECK(r.passed());
  CHECK(r.facts.at("representative") == "{0,3}");

  const Element c0 = c4.element({1, 2});
  CHECK(canonical_representative(h, {b2.one()}, {c0}) == c0);
  CHECK(canonical_representative(h, atoms, {c0, c0}) == c0);

  CHECK(kind_of([&] { canonical_representative(h, {b2.atom(0)}, {c0}); }) == ErrorKind::NotMaximalAntichain);
  CHECK(kind_of([&] { canonical_representative(h, {b2.atom(0), b2.one()}, {c0, c0}); }) ==
        ErrorKind::NotMaximalAntichain);

  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    FiniteCBA b(1 + rng() % 4);
    std::vector<std::size_t> f;
    for (std::size_t a = 0; a < b.atom_count(); ++a) f.push_back(a);
    while (f.size() < b.atom_count() + rng() % 10) f.push_back(rng() % b.atom_count());
    FiniteCBA c(f.size());
    const auto g = hom_from_fiber_map(b, c, f);
    // a random partition of the base atoms
    std::vector<Element> cells(1 + rng() % b.atom_count(), b.zero());
    for (std::size_t a = 0; a < b.atom_count(); ++a) cells[rng() % cells.size()].set(a);
    std::erase_if(cells, [](const Element& e) { return e.none(); });
    std::vector<Element> reps;
    for (std::size_t k = 0; k < cells.size(); ++k) reps.push_back(Element::from_mask(c.atom_count(), rng()));
    const auto audit = canonical_representative_audit(g, cells, reps);
    CHECK_MESSAGE(audit.passed(), audit.summary());
  }
}

TEST_CASE("two-step isomorphism") {
  FiniteCBA b2(2), c4(4);
  const auto r = two_step_iso_audit(hom_from_fiber_map(b2, c4, {0, 0, 1, 1}));
  CHECK(r.passed());
  CHECK(r.facts.at("atom-matching") == "0->(0,0) 1->(0,1) 2->(1,0) 3->(1,1)");
  const auto interleaved = two_step_iso_audit(hom_from_fiber_map(b2, c4, {1, 0, 1, 0}));
  CHECK(interleaved.passed());
  CHECK(interleaved.facts.at("atom-matching") == "0->(1,0) 1->(0,0) 2->(1,1) 3->(0,1)");

  const auto id = two_step_iso(CompleteHom::identity(c4));
  CHECK(id.to_target == CompleteHom::identity(c4));
  CHECK(two_step_iso_audit(CompleteHom::identity(c4)).passed());
  CHECK(kind_of([&] { two_step_iso(hom_from_fiber_map(b2, c4, {0, 0, 0, 0})); }) == ErrorKind::NotRegular);

  // round trip through build_two_step
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    AtomwisePresentation p{FiniteCBA(1 + rng() % 4), {}};
    for (std::size_t a = 0; a < p.base.atom_count(); ++a) p.fiber_atoms.push_back(1 + rng() % 4);
    const TwoStep t(p);
    const auto iso = two_step_iso(t.embedding());
    for (std::size_t a = 0; a < p.base.atom_count(); ++a) CHECK(iso.two_step.fiber_atoms(a) == p.fiber_atoms[a]);
    CHECK(iso.to_target == CompleteHom::identity(t.algebra()));
    CHECK(two_step_audit(t).passed());
  }
}

TEST_CASE("quotient homomorphisms") {
  FiniteCBA b1(1), b2(2), c2(2), c4(4), c8(8);
  const auto id = CompleteHom::identity(c4);
  const auto trivial = quotient_hom(make_triangle(id, id, id), 1);
  CHECK(trivial.hom == CompleteHom::identity(trivial.source.algebra()));

  const auto split = make_triangle(hom_from_fiber_map(b1, c2, {0, 0}), hom_from_fiber_map(b1, c4, {0, 0, 0, 0}),
                                   doubling(2));
  CHECK(quotient_hom(split, 0).hom == doubling(2));

  const auto chain = make_triangle(doubling(2), doubling(2).then(doubling(4)), doubling(4));
  const auto q = quotient_hom(chain, 0);
  CHECK(q.source.support() == c4.element({0, 1}));
  CHECK(q.hom == doubling(2));
  CHECK(quotient_hom_audit(chain).passed());

  CHECK(kind_of([&] { make_triangle(doubling(2), doubling(2).then(doubling(4)), hom_from_fiber_map(c4, c8, {2, 2, 1, 1, 0, 0, 3, 3})); }) ==
        ErrorKind::NonCommuting);

  // class preservation against the generated-filter definition
  for (std::size_t u = 0; u < 2; ++u) {
    for (const auto& c : c4.elements()) {
      for (const auto& d : c4.elements()) {
        if (!same_class(chain.i0, u, c, d)) continue;
        CHECK(same_class(chain.i1, u, chain.j.apply(c), chain.j.apply(d)));
      }
    }
  }
}

TEST_CASE("every triangle up to isomorphism, base <= 2 atoms, top <= 8 atoms") {
  // A commuting triangle of regular fiber-map embeddings is, up to relabeling,
  // a count of middle atoms per base atom and of top atoms per middle atom.
  std::size_t triangles = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    for (std::size_t m = n; m <= 8; ++m) {
      std::vector<std::size_t> mid_cur;
      compositions(n, m, mid_cur, [&](const std::vector<std::size_t>& mid) {
        for (std::size_t total = m; total <= 8; ++total) {
          std::vector<std::size_t> top_cur;
          compositions(m, total, top_cur, [&](const std::vector<std::size_t>& top) {
            const TwoStep d1({FiniteCBA(n), mid});
            const TwoStep d2({d1.algebra(), top});
            const auto t = make_triangle(d1.embedding(), d1.embedding().then(d2.embedding()), d2.embedding());
            const auto r = quotient_hom_audit(t);
            if (!r.passed()) FAIL(r.summary());
            for (std::size_t u = 0; u < n; ++u) CHECK(quotient_hom(t, u).hom.is_regular());
            ++triangles;
          });
        }
      });
    }
  }
  // sum of C(m-1, n-1) * C(total-1, m-1)
  CHECK(triangles == 1024);
}

TEST_CASE("lifting fiberwise embeddings") {
  FiniteCBA b2(2);
  const std::vector<CompleteHom> ks{doubling(1), CompleteHom::identity(FiniteCBA(2))};
  const auto l = lift_embedding_name(b2, ks);
  CHECK(l.lower.algebra().atom_count() == 3);
  CHECK(l.upper.algebra().atom_count() == 4);
  CHECK(l.hom.fiber_map() == std::vector<std::size_t>{0, 0, 1, 2});
  CHECK(lift_embedding_audit(l, ks).passed());

  const std::vector<CompleteHom> ids{CompleteHom::identity(FiniteCBA(3)), CompleteHom::identity(FiniteCBA(1))};
  const auto li = lift_embedding_name(b2, ids);
  CHECK(li.hom == CompleteHom::identity(li.lower.algebra()));

  const auto collapse = hom_from_fiber_map(FiniteCBA(2), FiniteCBA(1), {0});
  CHECK(kind_of([&] { lift_embedding_name(b2, {doubling(1), collapse}); }) == ErrorKind::FiberNotRegular);
  CHECK(kind_of([&] { lift_embedding_name(b2, {doubling(1)}); }) == ErrorKind::ArityMismatch);

  std::mt19937_64 rng(21);
  for (int round = 0; round < 30; ++round) {
    FiniteCBA b(1 + rng() % 3);
    std::vector<CompleteHom> fam;
    for (std::size_t a = 0; a < b.atom_count(); ++a) {
      const std::size_t s = 1 + rng() % 3;
      std::vector<std::size_t> f;
      for (std::size_t k = 0; k < s; ++k) f.push_back(k);
      while (f.size() < s + rng() % 3) f.push_back(rng() % s);
      std::shuffle(f.begin(), f.end(), rng);
      fam.push_back(hom_from_fiber_map(FiniteCBA(s), FiniteCBA(f.size()), f));
    }
    CHECK(lift_embedding_audit(lift_embedding_name(b, fam), fam).passed());
  }
}

TEST_CASE("three-step associativity") {
  const auto trivial = three_step_assoc_audit({FiniteCBA(2), {1, 1}, {{1}, {1}}});
  CHECK(trivial.passed());
  CHECK(trivial.facts.at("atoms") == "2");

  const auto doubling_tower = three_step_assoc_audit({FiniteCBA(2), {2, 2}, {{2, 2}, {2, 2}}});
  CHECK(doubling_tower.passed());
  CHECK(doubling_tower.facts.at("atoms") == "8");
  CHECK(doubling_tower.facts.at("ultrafilter-pairs") == "4");

  CHECK(kind_of([] { three_step_assoc_audit({FiniteCBA(2), {1}, {{1}}}); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([] { three_step_assoc_audit({FiniteCBA(1), {2}, {{1}}}); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([] { three_step_assoc_audit({FiniteCBA(1), {1}, {{0}}}); }) == ErrorKind::EmptyFiber);

  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    ThreeStepTower t{FiniteCBA(1 + rng() % 3), {}, {}};
    for (std::size_t a = 0; a < t.base.atom_count(); ++a) {
      t.mid.push_back(1 + rng() % 2);
      t.top.emplace_back();
      for (std::size_t d = 0; d < t.mid.back(); ++d) t.top.back().push_back(1 + rng() % 2);
    }
    const auto r = three_step_assoc_audit(t);
    CHECK_MESSAGE(r.passed(), r.summary());
  }
}
