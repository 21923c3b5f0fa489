#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "forcing/errors.hpp"
#include "forcing/filters.hpp"
#include "forcing/finite_cba.hpp"
#include "forcing/free_algebra.hpp"
#include "forcing/poset.hpp"

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

Poset random_poset(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng() % 3 == 0) rel.emplace_back(i, j);
    }
  }
  return Poset::from_relation(labels, rel);
}

// Every <=*-class of subsets of P, found by brute force over all subsets.
std::size_t star_classes(const Poset& p) {
  const std::size_t n = p.size();
  std::vector<Element> reps;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const Element s = Element::from_mask(n, m);
    bool fresh = true;
    for (const auto& r : reps) fresh = fresh && !p.star_equiv(s, r);
    if (fresh) reps.push_back(s);
  }
  return reps.size();
}

std::size_t minimal_points(const Poset& p) {
  std::size_t k = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    bool minimal = true;
    for (std::size_t y = 0; y < p.size(); ++y) minimal = minimal && (y == x || !p.leq(y, x));
    k += minimal;
  }
  return k;
}

// Truth table of an expression over generators x0..x{k-1}.
bool eval_expr(const FreeExpr& e, std::uint64_t assignment) {
  switch (e.op) {
    case FreeExpr::Op::Const: return e.value;
    case FreeExpr::Op::Var: return (assignment >> e.var.index) & 1U;
    case FreeExpr::Op::Not: return !eval_expr(e.args[0], assignment);
    case FreeExpr::Op::And: {
      for (const auto& a : e.args) {
        if (!eval_expr(a, assignment)) return false;
      }
      return true;
    }
    case FreeExpr::Op::Or: {
      for (const auto& a : e.args) {
        if (eval_expr(a, assignment)) return true;
      }
      return false;
    }
  }
  return false;
}

FreeExpr random_expr(std::mt19937_64& rng, int depth, int vars) {
  const auto roll = rng() % 6;
  if (depth == 0 || roll == 0) {
    if (rng() % 8 == 0) return FreeExpr{FreeExpr::Op::Const, rng() % 2 == 0, {}, {}};
    return FreeExpr{FreeExpr::Op::Var, false, Generator::of("x", static_cast<std::int64_t>(rng() % vars)), {}};
  }
  if (roll == 1) return FreeExpr{FreeExpr::Op::Not, false, {}, {random_expr(rng, depth - 1, vars)}};
  FreeExpr e{roll % 2 ? FreeExpr::Op::And : FreeExpr::Op::Or, false, {}, {}};
  e.args.push_back(random_expr(rng, depth - 1, vars));
  e.args.push_back(random_expr(rng, depth - 1, vars));
  return e;
}

bool bdd_at(const FreeElement& f, std::uint64_t assignment) {
  return f.evaluate([assignment](const Generator& g) { return g.family == "x" && ((assignment >> g.index) & 1U); });
}

}  // namespace

TEST_CASE("element operations agree with std::set") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 200;
    std::set<std::size_t> a, b;
    std::vector<std::size_t> va, vb;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 2) a.insert(i), va.push_back(i);
      if (rng() % 3 == 0) b.insert(i), vb.push_back(i);
    }
    const Element ea = Element::of(n, va), eb = Element::of(n, vb);
    std::set<std::size_t> meet, join;
    for (auto x : a) {
      if (b.count(x)) meet.insert(x);
      join.insert(x);
    }
    join.insert(b.begin(), b.end());
    CHECK((ea & eb).count() == meet.size());
    CHECK((ea | eb).count() == join.size());
    CHECK((~ea).count() == n - a.size());
    CHECK(ea.leq(eb) == std::includes(b.begin(), b.end(), a.begin(), a.end()));
    CHECK(Element::parse(ea.to_string(), n) == ea);
    CHECK(ea.atoms() == std::vector<std::size_t>(a.begin(), a.end()));
  }
}

TEST_CASE("element parsing rejects malformed text") {
  CHECK(Element::parse(" { 0 , 2 } ", 4) == Element::of(4, {0, 2}));
  CHECK(Element::parse("{}", 3).none());
  CHECK(kind_of([] { Element::parse("{0,4}", 4); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { Element::parse("{0,", 4); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { Element::parse("0,1", 4); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)(Element(2) | Element(3)); }) == ErrorKind::MixedAlgebras);
  CHECK(kind_of([] { FiniteCBA(kMaxAtoms + 1); }) == ErrorKind::TooManyAtoms);
}

TEST_CASE("relativization round-trips") {
  FiniteCBA b(6);
  const Relativization r(b, Element::of(6, {1, 3, 4}));
  CHECK(r.algebra().atom_count() == 3);
  CHECK(r.lower(Element::of(6, {0, 3, 5})) == Element::of(3, {1}));
  for (const auto& x : r.algebra().elements()) CHECK(r.lower(r.lift(x)) == x);
  CHECK(kind_of([&] { Relativization(b, b.zero()); }) == ErrorKind::ZeroRestriction);
}

TEST_CASE("poset validation") {
  CHECK(kind_of([] { Poset({"a", "b"}, {{true, true}, {true, true}}); }) == ErrorKind::InvalidPoset);
  CHECK(kind_of([] { Poset({"a", "b"}, {{false, false}, {false, true}}); }) == ErrorKind::InvalidPoset);
  CHECK(kind_of([] {
          Poset({"a", "b", "c"}, {{true, true, false}, {false, true, true}, {false, false, true}});
        }) == ErrorKind::InvalidPoset);
  const Poset t = Poset::reversed_tree(2);
  CHECK(t.size() == 3);
  CHECK(t.leq(t.index_of("r0"), t.index_of("r")));
  CHECK(!t.compatible(t.index_of("r0"), t.index_of("r1")));
}

TEST_CASE("separative quotient examples") {
  const auto chain = separative_quotient(Poset::chain(2));
  CHECK(chain.quotient.size() == 1);
  CHECK(chain.class_of == std::vector<std::size_t>{0, 0});
  for (const auto& p : {Poset::antichain(3), Poset::reversed_tree(2), Poset::reversed_tree(3)}) {
    const auto q = separative_quotient(p);
    CHECK(q.quotient.size() == p.size());
    CHECK(p.is_separative());
  }
}

TEST_CASE("separative quotient is separative and order-reflecting on random posets") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    const Poset p = random_poset(rng, 1 + rng() % 6);
    const auto q = separative_quotient(p);
    CHECK(q.quotient.is_separative());
    for (std::size_t x = 0; x < p.size(); ++x) {
      for (std::size_t y = 0; y < p.size(); ++y) {
        if (p.leq(x, y)) CHECK(q.quotient.leq(q.class_of[x], q.class_of[y]));
        CHECK(p.compatible(x, y) == q.quotient.compatible(q.class_of[x], q.class_of[y]));
      }
    }
  }
}

TEST_CASE("completion examples") {
  const Poset single = Poset::antichain(1);
  CHECK(boolean_completion(single).algebra.atom_count() == 1);
  const auto tree = boolean_completion(Poset::reversed_tree(2));
  CHECK(tree.algebra.atom_count() == 2);
  CHECK(tree.embedding[0].all());
  CHECK(boolean_completion(Poset::antichain(3)).algebra.atom_count() == 3);
  CHECK(boolean_completion(Poset::reversed_tree(3)).algebra.atom_count() == 4);
}

TEST_CASE("completion agrees with the star-class count and the minimal points") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    const Poset p = random_poset(rng, 1 + rng() % 6);
    const auto c = boolean_completion(p);
    CHECK(audit_completion(p, c).passed());
    CHECK(c.algebra.atom_count() == minimal_points(p));
    CHECK(star_classes(p) == (std::size_t{1} << c.algebra.atom_count()));
    if (p.is_separative()) {
      // separative: the embedding is injective
      for (std::size_t x = 0; x < p.size(); ++x) {
        for (std::size_t y = 0; y < p.size(); ++y) {
          CHECK((c.embedding[x].leq(c.embedding[y])) == p.leq(x, y));
        }
      }
    }
  }
}

TEST_CASE("dense sets and maximal antichains") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    CHECK(audit_dense_antichain_facts(random_poset(rng, 1 + rng() % 6)).passed());
  }
}

TEST_CASE("ultrafilters and Stone sets") {
  FiniteCBA b(3);
  const auto us = ultrafilters(b);
  CHECK(us.size() == 3);
  for (const auto& x : b.elements()) {
    std::size_t members = 0;
    for (const auto& u : us) {
      members += u.contains(x);
      CHECK(u.contains(~x) != u.contains(x));
    }
    CHECK(stone_set(~x) == ~stone_set(x));
    CHECK(members == x.count());
  }
}

TEST_CASE("quotient by filter") {
  FiniteCBA b4(4);
  const auto q = quotient_by_filter(b4, {{b4.element({0, 1})}, FilterKind::Filter});
  CHECK(q.algebra.algebra().atom_count() == 2);
  FiniteCBA b2(2);
  CHECK(quotient_by_filter(b2, {{b2.atom(0)}, FilterKind::Filter}).algebra.algebra().atom_count() == 1);
  CHECK(quotient_by_filter(b4, {{b4.one()}, FilterKind::Filter}).algebra.algebra().atom_count() == 4);
  CHECK(kind_of([&] { quotient_by_filter(b4, {{b4.atom(0), b4.atom(1)}, FilterKind::Filter}); }) ==
        ErrorKind::ImproperFilter);
  CHECK(kind_of([&] { quotient_by_filter(b4, {{b4.element({0, 1}), b4.element({2, 3})}, FilterKind::Ideal}); }) ==
        ErrorKind::ImproperFilter);

  // brute force: classes of x ~ y iff x ^ y lies in the dual ideal
  std::mt19937_64 rng(9);
  for (int round = 0; round < 100; ++round) {
    FiniteCBA b(1 + rng() % 5);
    FilterSpec spec{{}, rng() % 2 ? FilterKind::Filter : FilterKind::Ideal};
    for (int g = 0; g < 2; ++g) spec.generators.push_back(Element::from_mask(b.atom_count(), rng()));
    const Element bound = filter_bound(b, spec);
    if (bound.none()) continue;
    std::set<std::vector<std::uint64_t>> classes;
    auto in_ideal = [&](const Element& x) {
      // x is in the ideal iff ~x is in the generated filter
      return spec.kind == FilterKind::Filter ? b.meet(spec.generators).leq(~x) : x.leq(b.join(spec.generators));
    };
    std::vector<Element> reps;
    for (const auto& x : b.elements()) {
      bool fresh = true;
      for (const auto& r : reps) fresh = fresh && !in_ideal(x ^ r);
      if (fresh) reps.push_back(x);
    }
    const auto q2 = quotient_by_filter(b, spec);
    CHECK(reps.size() == (std::size_t{1} << q2.algebra.algebra().atom_count()));
    for (const auto& x : b.elements()) {
      for (const auto& y : b.elements()) {
        CHECK((q2.class_of(x) == q2.class_of(y)) == in_ideal(x ^ y));
      }
    }
  }
}

TEST_CASE("generator names") {
  CHECK(Generator::parse("x12") == Generator::of("x", 12));
  CHECK(Generator::parse("top").index == -1);
  CHECK(Generator::parse("x2") < Generator::parse("x10"));
  CHECK(Generator::parse("x10") < Generator::parse("y0"));
  CHECK(kind_of([] { Generator::parse("12"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("free normal forms are canonical") {
  CHECK(FreeElement::parse("x0 & ~x0").is_zero());
  CHECK(FreeElement::parse("x0 | ~x0").is_one());
  CHECK(FreeElement::parse("x0 & (x1 | x2)") == FreeElement::parse("(x0 & x1) | (x2 & x0)"));
  CHECK(FreeElement::parse("¬(x0 ∧ x1)") == FreeElement::parse("~x0 | ~x1"));
  CHECK(FreeElement::parse("x0 & ~y1").to_string() == "x0 & ~y1");
  CHECK(kind_of([] { FreeElement::parse("x0 & "); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { FreeElement::parse("(x0"); }) == ErrorKind::SyntaxError);

  std::mt19937_64 rng(21);
  for (int round = 0; round < 300; ++round) {
    const FreeExpr e = random_expr(rng, 4, 5);
    const FreeElement f = free_normalize(e);
    for (std::uint64_t a = 0; a < 32; ++a) CHECK(bdd_at(f, a) == eval_expr(e, a));
    CHECK(FreeElement::parse(f.to_string()) == f);
    // same function, same root
    const FreeExpr e2{FreeExpr::Op::Not, false, {}, {FreeExpr{FreeExpr::Op::Not, false, {}, {e}}}};
    CHECK(free_normalize(e2) == f);
  }
}

TEST_CASE("free projection is existential quantification") {
  const auto x0 = FreeElement::generator("x0");
  const auto y = FreeElement::generator("y");
  CHECK(free_project(x0 & y, {Generator::parse("y")}) == x0);
  CHECK(free_project(y, {Generator::parse("y")}).is_one());
  CHECK(free_project(~y, {Generator::parse("y")}).is_one());

  std::mt19937_64 rng(23);
  for (int round = 0; round < 200; ++round) {
    const FreeElement f = free_normalize(random_expr(rng, 4, 4));
    const auto k = static_cast<std::int64_t>(rng() % 4);
    const FreeElement p = free_project(f, {Generator::of("x", k)});
    const FreeElement d = free_dual_project_onto(f, [k](const Generator& g) { return g.index != k; });
    for (std::uint64_t a = 0; a < 16; ++a) {
      const std::uint64_t a0 = a & ~(std::uint64_t{1} << k), a1 = a | (std::uint64_t{1} << k);
      CHECK(bdd_at(p, a) == (bdd_at(f, a0) || bdd_at(f, a1)));
      CHECK(bdd_at(d, a) == (bdd_at(f, a0) && bdd_at(f, a1)));
    }
    // least element above f not mentioning x_k
    CHECK(f.leq(p));
    CHECK(d.leq(f));
  }
}

TEST_CASE("chain vanishing") {
  auto cyl = [](std::size_t n) {
    FreeElement a = FreeElement::one();
    for (std::size_t i = 0; i < n; ++i) a &= FreeElement::generator(Generator::of("x", static_cast<std::int64_t>(i)));
    return a;
  };
  using K = ChainVerdict::Kind;
  CHECK(chain_vanishing(FreeElement::zero(), cyl).kind == K::LowerBoundZero);
  CHECK(chain_vanishing(FreeElement::parse("x0 & x1"), cyl) == ChainVerdict{K::FailsAt, 3});
  CHECK(chain_vanishing(FreeElement::parse("x0"), cyl) == ChainVerdict{K::FailsAt, 2});
  CHECK(chain_vanishing(FreeElement::parse("x0 & x1 & x2 & x3 & x4"), cyl) == ChainVerdict{K::FailsAt, 6});
  auto bumpy = [&](std::size_t n) { return n == 2 ? FreeElement::one() : cyl(n); };
  CHECK(kind_of([&] { chain_vanishing(FreeElement::parse("x0"), bumpy); }) == ErrorKind::ChainNotDescending);
  auto flat = [](std::size_t) { return FreeElement::parse("x0"); };
  CHECK(kind_of([&] { chain_vanishing(FreeElement::parse("x0"), flat, 5); }) == ErrorKind::SupportEscapeViolation);
}
