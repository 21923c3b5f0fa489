#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "forcing/errors.hpp"
#include "forcing/semigen.hpp"

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

Element el(std::size_t n, std::initializer_list<std::size_t> xs) { return Element::of(n, xs); }

bool member(const std::vector<Element>& xs, const Element& x) {
  for (const auto& y : xs) {
    if (y == x) return true;
  }
  return false;
}

// Atom t is below sg iff every designated family has a member of M above t.
Element sg_oracle(const ModelTrace& t) {
  const std::size_t n = t.algebra.atom_count();
  Element out(n);
  for (std::size_t a = 0; a < n; ++a) {
    bool all = true;
    auto scan = [&](const std::vector<std::vector<Element>>& fams) {
      for (const auto& d : fams) {
        bool hit = false;
        for (const auto& x : d) hit = hit || (x.test(a) && member(t.carrier, x));
        all = all && hit;
      }
    };
    scan(t.designated_predense);
    scan(t.designated_antichains);
    if (all) out.set(a);
  }
  return out;
}

// The same below b with M & b and D & b, in the parent algebra.
Element restricted_oracle(const ModelTrace& t, const Element& b) {
  std::vector<Element> mb;
  for (const auto& x : t.carrier) mb.push_back(x & b);
  const std::size_t n = t.algebra.atom_count();
  Element out(n);
  for (std::size_t a : b.atoms()) {
    bool all = true;
    auto scan = [&](const std::vector<std::vector<Element>>& fams) {
      for (const auto& d : fams) {
        bool hit = false;
        for (const auto& x : d) hit = hit || (x.test(a) && member(mb, x & b));
        all = all && hit;
      }
    };
    scan(t.designated_predense);
    scan(t.designated_antichains);
    if (all) out.set(a);
  }
  return out;
}

ModelTrace base_trace(std::size_t n, std::vector<Element> carrier) {
  ModelTrace t;
  t.algebra = FiniteCBA(n);
  t.carrier = std::move(carrier);
  return t;
}

}  // namespace

TEST_CASE("sg and gen on small traces") {
  ModelTrace t = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {0, 1, 2, 3})});
  t.designated_antichains = {{el(4, {0, 1}), el(4, {2, 3})}};
  CHECK(sg_value(t) == el(4, {0, 1}));
  CHECK(gen_value(t) == el(4, {0, 1}));

  ModelTrace empty = base_trace(3, {});
  CHECK(sg_value(empty).all());
  CHECK(gen_value(empty).all());

  ModelTrace g = base_trace(3, {el(3, {0}), el(3, {1})});
  g.designated_antichains = {{el(3, {0}), el(3, {1}), el(3, {2})}};
  CHECK(gen_value(g) == ~el(3, {2}));

  // Designating more can only shrink sg.
  ModelTrace more = t;
  more.designated_predense = {{el(4, {0, 2}), el(4, {1, 3})}};
  CHECK(sg_value(more).leq(sg_value(t)));
  CHECK(sg_value(more).none());
}

TEST_CASE("sg against the atomwise oracle") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const ModelTrace t = random_model_trace(rng, 1 + k % 6);
    CHECK(sg_value(t) == sg_oracle(t));
  }
}

TEST_CASE("disjointify") {
  const FiniteCBA b3(3);
  const auto a = disjointify(b3, {el(3, {0, 1}), el(3, {1, 2}), el(3, {2})});
  REQUIRE(a.size() == 2);
  CHECK(a[0] == el(3, {0, 1}));
  CHECK(a[1] == el(3, {2}));
  const auto one = disjointify(b3, {b3.one(), el(3, {1})});
  REQUIRE(one.size() == 1);
  CHECK(one[0].all());
  CHECK(kind_of([&] { disjointify(b3, {el(3, {0}), el(3, {1})}); }) == ErrorKind::NotPredense);
}

TEST_CASE("disjointification audit and its closure gap") {
  // Cells {0,1} and {2,3}; a_1 = {0,1} is in M while b_1 = {0,1,2} is not.
  ModelTrace t = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {2, 3}), el(4, {0, 1, 2, 3})});
  t.designated_predense = {{el(4, {2}), el(4, {0, 1, 2}), el(4, {3})}};
  const auto r = disjointification_audit(t);
  CHECK(r.passed());
  CHECK(r.facts.at("closure-gap") != "none");
  ModelTrace closed = t;
  closed.designated_antichains.push_back(disjointify(t.algebra, t.designated_predense[0]));
  CHECK(sg_value(closed).none());
  CHECK(gen_value(closed) == el(4, {0, 1}));

  ModelTrace ok = t;
  ok.designated_predense = {{el(4, {0, 1}), el(4, {0, 2}), el(4, {2, 3})}};
  const auto r2 = disjointification_audit(ok);
  CHECK(r2.passed());
  CHECK(r2.facts.at("closure-gap") == "none");
}

TEST_CASE("restriction") {
  ModelTrace t = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {2, 3}), el(4, {0, 1, 2, 3})});
  t.designated_antichains = {{el(4, {0, 1}), el(4, {2, 3})}};
  const auto low = restrict_trace(t, el(4, {0, 1}));
  CHECK(low.algebra.atom_count() == 2);
  CHECK(restriction_audit(t, el(4, {0, 1})).passed());
  CHECK(restriction_audit(t, el(4, {0, 1})).facts.at("sg-restricted") == el(4, {0, 1}).to_string());
  CHECK(kind_of([&] { restriction_audit(t, el(4, {0, 2})); }) == ErrorKind::NotInCarrier);
  CHECK(kind_of([&] { restriction_audit(t, el(4, {})); }) == ErrorKind::NotInCarrier);

  ModelTrace f = base_trace(4, {el(4, {}), el(4, {0, 2}), el(4, {1, 3}), el(4, {0, 1, 2, 3})});
  f.designated_antichains = {{el(4, {0}), el(4, {1}), el(4, {2, 3})}};
  const auto r = restriction_audit(f, el(4, {0, 2}));
  CHECK(r.passed());
  CHECK(r.facts.at("sg-restricted") == el(4, {}).to_string());

  // d & b in M with no witness in D & M: only the inequality is asserted.
  ModelTrace gap = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {2, 3}), el(4, {0, 1, 2, 3})});
  gap.designated_predense = {{el(4, {0, 1, 2}), el(4, {3})}};
  const auto g = restriction_audit(gap, el(4, {0, 1}));
  CHECK(g.passed());
  CHECK(g.facts.at("closure-gap") != "none");
  CHECK(g.facts.at("sg-restricted") == el(4, {0, 1}).to_string());
  CHECK(sg_value(gap).none());
}

TEST_CASE("restriction against the oracle on random traces") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const ModelTrace t = random_model_trace(rng, 1 + k % 6);
    for (const auto& b : t.carrier) {
      if (b.none()) continue;
      const auto r = restriction_audit(t, b);
      CHECK(r.facts.at("closure-gap") == "none");
      CHECK(r.passed());
      CHECK(r.facts.at("sg-restricted") == restricted_oracle(t, b).to_string());
      CHECK(restricted_oracle(t, b) == (sg_oracle(t) & b));
    }
  }
}

TEST_CASE("ordinal names and the semigeneric supremum") {
  ModelTrace t = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {0, 1, 2, 3})});
  t.kappa = 2;
  t.delta = 1;
  t.ordinal_names = {{{el(4, {0}), el(4, {1}), el(4, {2}), el(4, {3})}, {0, 0, 1, 1}}};
  CHECK(below_delta(t, t.ordinal_names[0]) == el(4, {0, 1}));
  const auto r = semigeneric_sup_audit(t);
  CHECK(r.passed());
  CHECK(r.facts.at("sg") == el(4, {0, 1}).to_string());
  CHECK(r.facts.at("semigeneric-conditions") == "3");

  // A level below delta missing from M breaks the correspondence.
  ModelTrace bad = t;
  bad.carrier = {el(4, {}), el(4, {0, 1, 2, 3})};
  CHECK_FALSE(semigeneric_sup_audit(bad).passed());

  ModelTrace a = base_trace(3, {el(3, {}), el(3, {0}), el(3, {0, 1, 2})});
  a.kappa = 3;
  a.delta = 1;
  a.designated_antichains = {{el(3, {0}), el(3, {1}), el(3, {2})}};
  const auto name = ordinal_name_of(a, a.designated_antichains[0]);
  CHECK(name.labels == std::vector<std::size_t>{0, 1, 2});
  CHECK(below_delta(a, name) == el(3, {0}));
  CHECK(semigeneric_sup_audit(a).passed());
  a.kappa = 2;
  CHECK(kind_of([&] { ordinal_name_of(a, a.designated_antichains[0]); }) == ErrorKind::LabelOutOfRange);

  ModelTrace k1 = base_trace(2, {});
  k1.ordinal_names = {{{el(2, {0, 1})}, {0}}};
  CHECK(below_delta(k1, k1.ordinal_names[0]).all());
}

TEST_CASE("validation errors") {
  ModelTrace t = base_trace(3, {el(3, {})});
  t.designated_predense = {{el(3, {0, 1, 2})}, {el(3, {0})}};
  CHECK(kind_of([&] { sg_value(t); }) == ErrorKind::NotPredense);
  t.designated_predense.clear();
  t.designated_antichains = {{el(3, {0, 1}), el(3, {1, 2})}};
  CHECK(kind_of([&] { gen_value(t); }) == ErrorKind::NotMaximal);
  t.designated_antichains.clear();
  t.delta = 3;
  t.kappa = 2;
  CHECK(kind_of([&] { validate_trace(t); }) == ErrorKind::ValidationError);
  t.delta = 1;
  t.ordinal_names = {{{el(3, {0, 1, 2})}, {5}}};
  CHECK(kind_of([&] { validate_trace(t); }) == ErrorKind::LabelOutOfRange);
  t.ordinal_names = {{{el(3, {0, 1, 2})}, {0, 1}}};
  CHECK(kind_of([&] { validate_trace(t); }) == ErrorKind::ArityMismatch);
}

TEST_CASE("sp identity along an embedding") {
  const auto h = hom_from_fiber_map(FiniteCBA(2), FiniteCBA(4), {0, 0, 1, 1});
  ModelTrace b = base_trace(2, {el(2, {}), el(2, {0}), el(2, {0, 1})});
  b.designated_antichains = {{el(2, {0}), el(2, {1})}};
  ModelTrace c = base_trace(4, {el(4, {}), el(4, {0, 1}), el(4, {0, 1, 2, 3})});
  c.designated_antichains = {{el(4, {0, 1}), el(4, {2, 3})}};
  const auto r = sp_identity_audit(h, b, c);
  CHECK(r.passed());
  CHECK(r.facts.at("sg-source") == el(2, {0}).to_string());

  ModelTrace off = c;
  off.carrier = {el(4, {}), el(4, {2, 3}), el(4, {0, 1, 2, 3})};
  const auto f = sp_identity_audit(h, b, off);
  CHECK_FALSE(f.passed());
  CHECK(f.first_failure()->law == "pi(c & sg(C, M)) = pi(c) & sg(B, M)");
  CHECK(kind_of([&] { sp_identity_audit(h, c, b); }) == ErrorKind::MixedAlgebras);
}

TEST_CASE("random traces pass the full audit") {
  std::mt19937_64 rng(2024);
  int nontrivial = 0;
  int with_names = 0;
  for (int k = 0; k < 200; ++k) {
    const ModelTrace t = random_model_trace(rng, 1 + k % 6);
    const auto r = sg_audit(t);
    CHECK_MESSAGE(r.passed(), r.summary());
    CHECK(r.facts.count("restriction-gap") == 0);
    CHECK(r.facts.at("disjointification: closure-gap") == "none");
    nontrivial += sg_value(t).all() ? 0 : 1;
    with_names += t.ordinal_names.empty() ? 0 : 1;
  }
  CHECK(nontrivial > 40);
  CHECK(with_names > 40);
}
