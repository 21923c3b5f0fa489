#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "forcing/bvm.hpp"
#include "forcing/errors.hpp"

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

const HFSet kEmpty = HFSet();
const HFSet kOne = HFSet::of({HFSet()});

BName random_name(std::mt19937_64& rng, std::size_t atoms, std::size_t rank) {
  std::vector<BName::Entry> entries;
  if (rank == 0) return BName::empty(atoms);
  const std::size_t k = rng() % 3;
  for (std::size_t i = 0; i < k; ++i) {
    entries.push_back({random_name(rng, atoms, rng() % rank), Element::from_mask(atoms, rng())});
  }
  return BName::from_entries(atoms, std::move(entries));
}

}  // namespace

TEST_CASE("hereditarily finite sets") {
  const HFSet two = HFSet::of({kEmpty, kOne});
  CHECK(two.rank() == 2);
  CHECK(two.contains(kOne));
  CHECK(kOne.subset_of(two));
  CHECK(HFSet::parse("{{},{{}}}") == two);
  CHECK(HFSet::parse(" { { } , { } } ") == kOne);
  CHECK(two.to_string() == "{{},{{}}}");
  CHECK(hf_sets_of_rank_at_most(1).size() == 2);
  CHECK(hf_sets_of_rank_at_most(2).size() == 4);
  CHECK(hf_sets_of_rank_at_most(3).size() == 16);
  CHECK(kind_of([] { HFSet::parse("{{}"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("names collapse relation form") {
  const BName e = BName::check(kEmpty, 2);
  const BName d = BName::from_entries(2, {{e, Element::of(2, {0})}, {e, Element::of(2, {1})}});
  CHECK(d.entries().size() == 1);
  CHECK(d.value_at(e).all());
  CHECK(d == BName::check(kOne, 2));
  CHECK(BName::from_entries(2, {{e, Element(2)}}) == BName::empty(2));
  CHECK(kind_of([&] { BName::from_entries(3, {{e, Element(3)}}); }) == ErrorKind::MixedAlgebras);
}

TEST_CASE("truth value of the one-point name") {
  const BName empty_check = BName::check(kEmpty, 2);
  const BName d = BName::from_entries(2, {{empty_check, Element::of(2, {0})}});
  const NameEnv env{{"x", empty_check}, {"y", d}};
  CHECK(truth_value(Formula::parse("x in y"), env, 2) == Element::of(2, {0}));
  CHECK(truth_value(Formula::parse("y = x"), env, 2) == Element::of(2, {1}));
  CHECK(eval_at_atom(d, 0) == kOne);
  CHECK(eval_at_atom(d, 1) == kEmpty);
}

TEST_CASE("check names decide like their sets") {
  const auto sets = hf_sets_of_rank_at_most(3);
  Valuator val(3);
  for (const auto& x : sets) {
    for (const auto& y : sets) {
      const BName a = BName::check(x, 3), b = BName::check(y, 3);
      CHECK(val.member(a, b).all() == y.contains(x));
      CHECK(val.member(a, b).none() == !y.contains(x));
      CHECK(val.equal(a, b).all() == (x == y));
      CHECK(val.subset(a, b).all() == x.subset_of(y));
    }
  }
}

TEST_CASE("formula syntax") {
  const Formula f = Formula::parse("~(x = y) & exists z in x. z sub y | forall w in y. w in x");
  CHECK(f.free_variables() == std::vector<std::string>{"x", "y"});
  CHECK(f.is_delta0());
  CHECK(Formula::parse(f.to_string()).to_string() == f.to_string());
  const Formula g = Formula::parse("∃z. z ∈ x ∧ ¬(z = y)");
  CHECK(!g.is_delta0());
  CHECK(g.free_variables() == std::vector<std::string>{"x", "y"});
  CHECK(kind_of([] { Formula::parse("forall z. z in x"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { Formula::parse("x in"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { Formula::parse("x < y"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { truth_value(Formula::parse("x in q"), {{"x", BName::empty(1)}}, 1); }) ==
        ErrorKind::UnresolvedReference);
}

TEST_CASE("rank bound and mixed algebras") {
  const BName deep = BName::check(HFSet::parse("{{{{{}}}}}"), 1);
  CHECK(deep.rank() == 4);
  CHECK(kind_of([&] { truth_value(Formula::parse("x = x"), {{"x", deep}}, 1, {}, 3); }) == ErrorKind::RankExceeded);
  CHECK(truth_value(Formula::parse("x = x"), {{"x", deep}}, 1).all());
  CHECK(kind_of([&] { truth_value(Formula::parse("x = y"), {{"x", BName::empty(1)}, {"y", BName::empty(2)}}, 1); }) ==
        ErrorKind::MixedAlgebras);
}

TEST_CASE("forcing audit on the rank-2 standard pool") {
  const auto pool = standard_pool(2, 1);
  CHECK(pool.size() == 16);
  const std::vector<Formula> fs{Formula::parse("x in y"), Formula::parse("x = y"), Formula::parse("x sub y")};
  const auto r = forcing_audit(2, pool, fs);
  CHECK(r.passed());
  CHECK(r.cases() == 3 * 16 * 16 * 2);
  CHECK(r.facts.at("divergences") == "0");
  CHECK(kind_of([&] { forcing_audit(2, {}, fs); }) == ErrorKind::EmptyPool);
}

TEST_CASE("forcing audit with quantifiers on random names") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 20; ++round) {
    const std::size_t atoms = 1 + rng() % 3;
    std::vector<BName> pool;
    for (int k = 0; k < 6; ++k) pool.push_back(random_name(rng, atoms, 3));
    const std::vector<Formula> fs{
        Formula::parse("exists z in x. z = y"),
        Formula::parse("forall z in x. z in y"),
        Formula::parse("exists z in x. exists w in z. w sub y"),
        Formula::parse("~(x in y) | (forall z in y. ~(z = x))"),
        Formula::parse("exists z. z in x & y in z"),
    };
    const auto r = forcing_audit(atoms, pool, fs);
    CHECK_MESSAGE(r.passed(), r.summary());
  }
}

TEST_CASE("mixing") {
  const BName a = BName::check(kEmpty, 2), b = BName::check(kOne, 2);
  const BName m = mix({Element::of(2, {0}), Element::of(2, {1})}, {a, b});
  Valuator val(2);
  CHECK(Element::of(2, {0}).leq(val.equal(m, a)));
  CHECK(Element::of(2, {1}).leq(val.equal(m, b)));
  CHECK(kind_of([&] { mix({Element::of(2, {0}), Element::of(2, {0, 1})}, {a, b}); }) == ErrorKind::NotAntichain);

  std::mt19937_64 rng(4);
  for (int round = 0; round < 100; ++round) {
    const std::size_t atoms = 2 + rng() % 3;
    // a random partition of the atoms
    std::vector<Element> cells(1 + rng() % atoms, Element(atoms));
    for (std::size_t u = 0; u < atoms; ++u) cells[rng() % cells.size()].set(u);
    std::vector<BName> names;
    for (std::size_t k = 0; k < cells.size(); ++k) names.push_back(random_name(rng, atoms, 3));
    const BName mixed = mix(cells, names);
    Valuator v(atoms);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      CHECK(cells[k].leq(v.equal(mixed, names[k])));
      for (auto u : cells[k].atoms()) CHECK(eval_at_atom(mixed, u) == eval_at_atom(names[k], u));
    }
  }
}

TEST_CASE("fullness witnesses") {
  const auto pool = standard_pool(2, 1);
  const BName d = BName::from_entries(2, {{BName::check(kEmpty, 2), Element::of(2, {0})}});
  const Formula phi = Formula::parse("x in y");
  const auto w = fullness_witness(phi, "x", {{"y", d}}, pool, 2);
  CHECK(w.exists_value == Element::of(2, {0}));
  CHECK(w.witness_value == w.exists_value);
  CHECK(kind_of([&] { fullness_witness(phi, "x", {{"y", d}}, {}, 2); }) == ErrorKind::EmptyPool);

  std::mt19937_64 rng(8);
  for (int round = 0; round < 40; ++round) {
    const std::size_t atoms = 1 + rng() % 3;
    std::vector<BName> p;
    for (int k = 0; k < 5; ++k) p.push_back(random_name(rng, atoms, 2));
    const Formula f = Formula::parse("exists z in y. x sub z & ~(x = z)");
    const auto r = fullness_witness(f, "x", {{"y", random_name(rng, atoms, 3)}}, p, atoms);
    CHECK(r.witness_value == r.exists_value);
  }
}

TEST_CASE("lifting names along an embedding") {
  FiniteCBA b2(2), c4(4);
  const auto h = hom_from_fiber_map(b2, c4, {0, 0, 1, 1});
  const BName e = BName::check(kEmpty, 2);
  const BName d = BName::from_entries(2, {{e, Element::of(2, {0})}});
  const BName lifted = lift_name(h, d);
  const NameEnv env{{"x", BName::check(kEmpty, 4)}, {"y", lifted}};
  CHECK(truth_value(Formula::parse("x in y"), env, 4) == Element::of(4, {0, 1}));
  CHECK(lift_name(h, BName::check(kOne, 2)) == BName::check(kOne, 4));

  const std::vector<Formula> fs{Formula::parse("x in y"), Formula::parse("exists z in x. z sub y"),
                                Formula::parse("exists z. z in x & z in y")};
  const std::vector<std::pair<Formula, Formula>> pairs{
      {Formula::parse("exists z. z = x & z in y"), Formula::parse("exists z. z = x & ~(z in y)")}};
  const auto r = delta1_audit(h, standard_pool(2, 1), fs, pairs);
  CHECK_MESSAGE(r.passed(), r.summary());
  CHECK(r.facts.at("delta1-instances") != "0");
}
