#include "forcing/iteration.hpp"

#include <algorithm>
#include <string>

#include "forcing/errors.hpp"
#include "forcing/poset.hpp"
#include "forcing/sampling.hpp"
#include "forcing/two_step.hpp"

namespace forcing {

namespace {

std::string pair_string(std::size_t a, std::size_t b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

std::string show(const Element& e) { return e.to_string(); }
std::string show(const FreeElement& e) { return e.to_string(); }

template <class E>
std::vector<E> coordinates(const Thread<E>& f, std::size_t stages) {
  std::vector<E> out;
  out.reserve(stages);
  for (std::size_t b = 0; b < stages; ++b) out.push_back(f.at(b));
  return out;
}

template <class E>
bool leq_to(const std::vector<E>& g, const std::vector<E>& f) {
  for (std::size_t b = 0; b < g.size(); ++b) {
    if (!below(g[b], f[b])) return false;
  }
  return true;
}

// The thread of a finite-length system determined by its last coordinate.
Thread<Element> from_last(const FiniteSystem& s, const Element& x) {
  const std::size_t last = s.materialized() - 1;
  return Thread<Element>{[&s, x, last](std::size_t b) { return s.retract(b, last, x); }, ConstantSeed<Element>{last, x},
                         {}};
}

}  // namespace

// ---- FiniteSystem

FiniteSystem FiniteSystem::build(std::vector<FiniteCBA> algebras, const std::vector<StageMap>& maps) {
  if (algebras.empty()) fail(ErrorKind::ArityMismatch, "an iteration system needs at least one stage");
  FiniteSystem s;
  s.algebras_ = std::move(algebras);
  const std::size_t n = s.algebras_.size();
  s.maps_.resize(n);
  std::vector<std::optional<CompleteHom>> step(n);
  for (const auto& m : maps) {
    if (m.from >= m.to || m.to >= n) {
      fail(ErrorKind::ArityMismatch, "map " + pair_string(m.from, m.to) + " is not between two stages in order");
    }
    if (!(m.hom.source() == s.algebras_[m.from]) || !(m.hom.target() == s.algebras_[m.to])) {
      fail(ErrorKind::ArityMismatch, "map " + pair_string(m.from, m.to) + " does not match the stage algebras");
    }
    if (m.to == m.from + 1) {
      if (!m.hom.is_regular()) fail(ErrorKind::NotRegular, "stage " + std::to_string(m.from));
      step[m.from] = m.hom;
    }
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!step[k]) fail(ErrorKind::ArityMismatch, "missing map " + pair_string(k, k + 1));
  }
  for (std::size_t a = 0; a < n; ++a) {
    s.maps_[a].push_back(CompleteHom::identity(s.algebras_[a]));
    for (std::size_t b = a + 1; b < n; ++b) s.maps_[a].push_back(s.maps_[a].back().then(*step[b - 1]));
  }
  for (const auto& m : maps) {
    if (m.to > m.from + 1 && !(m.hom == s.map(m.from, m.to))) {
      fail(ErrorKind::CommutationFailure,
           "(" + std::to_string(m.from) + "," + std::to_string(m.to - 1) + "," + std::to_string(m.to) + ")");
    }
  }
  return s;
}

FiniteSystem FiniteSystem::chain(const std::vector<CompleteHom>& steps) {
  if (steps.empty()) fail(ErrorKind::ArityMismatch, "a chain needs at least one map");
  std::vector<FiniteCBA> algebras{steps.front().source()};
  std::vector<StageMap> maps;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    algebras.push_back(steps[k].target());
    maps.push_back({k, k + 1, steps[k]});
  }
  return build(std::move(algebras), maps);
}

FiniteSystem FiniteSystem::lazy(const std::function<CompleteHom(std::size_t)>& step, std::size_t materialized) {
  if (materialized < 2) fail(ErrorKind::ArityMismatch, "materialize at least two stages");
  std::vector<CompleteHom> steps;
  for (std::size_t k = 0; k + 1 < materialized; ++k) steps.push_back(step(k));
  FiniteSystem s = chain(steps);
  s.omega_ = true;
  return s;
}

std::optional<std::size_t> FiniteSystem::length() const {
  if (omega_) return std::nullopt;
  return algebras_.size();
}

const FiniteCBA& FiniteSystem::algebra(std::size_t stage) const {
  if (stage >= algebras_.size()) {
    fail(ErrorKind::ValidationError, "stage " + std::to_string(stage) + " is beyond the materialized stages");
  }
  return algebras_[stage];
}

const CompleteHom& FiniteSystem::map(std::size_t a, std::size_t b) const {
  if (a > b || b >= algebras_.size()) fail(ErrorKind::ValidationError, "no map " + pair_string(a, b));
  return maps_[a][b - a];
}

std::vector<Element> FiniteSystem::sample(std::size_t stage, std::mt19937_64& rng, std::size_t count) const {
  const FiniteCBA& a = algebra(stage);
  return element_domain(a, (std::size_t{1} << std::min<std::size_t>(a.atom_count(), 20)) <= std::max<std::size_t>(count, 64),
                        rng, count);
}

// ---- FreeTower

FreeTower::FreeTower(std::function<bool(std::size_t, const Generator&)> in_stage,
                     std::function<std::vector<Generator>(std::size_t)> sample_generators)
    : in_stage_(std::move(in_stage)), sample_generators_(std::move(sample_generators)) {}

FreeElement FreeTower::retract(std::size_t a, std::size_t, const FreeElement& y) const {
  return free_project_onto(y, [&](const Generator& g) { return in_stage_(a, g); });
}

bool FreeTower::contains(std::size_t stage, const FreeElement& x) const {
  for (const auto& g : x.support()) {
    if (!in_stage_(stage, g)) return false;
  }
  return true;
}

std::vector<FreeElement> FreeTower::sample(std::size_t stage, std::mt19937_64& rng, std::size_t count) const {
  std::vector<Generator> gens;
  for (const auto& g : sample_generators_(stage)) {
    if (in_stage_(stage, g)) gens.push_back(g);
  }
  std::vector<FreeElement> out{FreeElement::zero(), FreeElement::one()};
  for (const auto& g : gens) out.push_back(FreeElement::generator(g));
  if (gens.empty()) return out;
  auto literal = [&] {
    const FreeElement v = FreeElement::generator(gens[rng() % gens.size()]);
    return (rng() & 1U) ? v : ~v;
  };
  for (std::size_t k = 0; k < count; ++k) {
    FreeElement term = literal() & literal();
    out.push_back((rng() & 1U) ? term : (term | literal()));
  }
  return out;
}

// ---- generic algorithms

template <class E>
AuditResult system_audit(const IterationSystem<E>& s, std::size_t depth, std::uint64_t seed, std::size_t samples) {
  AuditResult r;
  r.audit = "iteration-system";
  std::mt19937_64 rng(seed);
  const std::size_t m = s.stages_to(depth);
  std::vector<std::vector<E>> xs;
  for (std::size_t a = 0; a < m; ++a) xs.push_back(s.sample(a, rng, samples));

  CheckBuilder ids("i_aa and pi_aa are the identity"), embeds("i_bc o i_ab = i_ac"), retracts("pi_ab o pi_bc = pi_ac");
  CheckBuilder left("pi_ab o i_ab = id"), regular("i_ab is injective"), joins("pi_ab preserves joins");
  for (std::size_t a = 0; a < m; ++a) {
    for (const auto& x : xs[a]) ids.expect_lazy(s.embed(a, a, x) == x && s.retract(a, a, x) == x, [&] { return show(x); });
    for (std::size_t b = a; b < m; ++b) {
      for (const auto& x : xs[a]) {
        const E y = s.embed(a, b, x);
        left.expect_lazy(s.retract(a, b, y) == x, [&] { return pair_string(a, b) + " at " + show(x); });
        regular.expect_lazy(!is_zero(y) || is_zero(x), [&] { return pair_string(a, b) + " at " + show(x); });
      }
      const auto& ys = xs[b];
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const auto& y1 = ys[k];
        const auto& y2 = ys[(k * 7 + 3) % ys.size()];
        joins.expect_lazy(s.retract(a, b, y1 | y2) == (s.retract(a, b, y1) | s.retract(a, b, y2)),
                          [&] { return pair_string(a, b) + " at " + show(y1) + ", " + show(y2); });
      }
      for (std::size_t c = b; c < m; ++c) {
        const std::string triple = "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
        for (const auto& x : xs[a]) {
          embeds.expect_lazy(s.embed(b, c, s.embed(a, b, x)) == s.embed(a, c, x), [&] { return triple + " at " + show(x); });
        }
        for (const auto& y : xs[c]) {
          retracts.expect_lazy(s.retract(a, b, s.retract(b, c, y)) == s.retract(a, c, y),
                               [&] { return triple + " at " + show(y); });
        }
      }
    }
  }
  for (auto* b : {&ids, &embeds, &retracts, &left, &regular, &joins}) r.checks.push_back(b->done());
  r.facts["depth"] = std::to_string(m - 1);
  return r;
}

template <class E>
Thread<E> constant_thread(const IterationSystem<E>& s, std::size_t stage, const E& seed) {
  if (!s.contains(stage, seed)) fail(ErrorKind::MixedAlgebras, "seed is not in stage " + std::to_string(stage));
  std::size_t support = stage;
  E base = seed;
  for (std::size_t a = 0; a < stage; ++a) {
    const E x = s.retract(a, stage, seed);
    if (s.embed(a, stage, x) == seed) {
      support = a;
      base = x;
      break;
    }
  }
  const IterationSystem<E>* sys = &s;
  Thread<E> t;
  t.at = [sys, support, base](std::size_t b) {
    return b >= support ? sys->embed(support, b, base) : sys->retract(b, support, base);
  };
  t.constant = ConstantSeed<E>{support, base};
  t.label = "const(" + std::to_string(support) + ": " + show(base) + ")";
  return t;
}

Thread<Element> eager_thread(std::vector<Element> coordinates, std::string label) {
  Thread<Element> t;
  t.at = [c = std::move(coordinates)](std::size_t b) {
    if (b >= c.size()) fail(ErrorKind::ValidationError, "thread has no coordinate " + std::to_string(b));
    return c[b];
  };
  t.label = std::move(label);
  return t;
}

template <class E>
ThreadCertificate thread_validate(const IterationSystem<E>& s, const Thread<E>& f, std::size_t depth) {
  const std::size_t m = s.stages_to(depth);
  const auto c = coordinates(f, m);
  std::size_t pairs = 0;
  for (std::size_t b = 0; b < m; ++b) {
    if (!s.contains(b, c[b])) fail(ErrorKind::MixedAlgebras, "coordinate " + std::to_string(b) + " is not in its stage");
    for (std::size_t a = 0; a <= b; ++a) {
      if (!(s.retract(a, b, c[b]) == c[a])) fail(ErrorKind::CoherenceFailure, pair_string(a, b));
      ++pairs;
    }
  }
  return ThreadCertificate{m - 1, pairs};
}

template <class E>
Thread<E> pointwise_sup(const IterationSystem<E>& s, const std::vector<Thread<E>>& threads) {
  const IterationSystem<E>* sys = &s;
  Thread<E> t;
  t.at = [sys, threads](std::size_t b) {
    E out = sys->zero(b);
    for (const auto& f : threads) out = out | f.at(b);
    return out;
  };
  bool all_constant = true;
  std::size_t support = 0;
  for (const auto& f : threads) {
    all_constant = all_constant && f.constant.has_value();
    if (f.constant) support = std::max(support, f.constant->support);
  }
  if (all_constant) {
    E seed = s.zero(support);
    for (const auto& f : threads) seed = seed | s.embed(f.constant->support, support, f.constant->seed);
    t.constant = ConstantSeed<E>{support, seed};
  }
  t.label = "sup of " + std::to_string(threads.size());
  return t;
}

template <class E>
Thread<E> meet_with_constant(const IterationSystem<E>& s, const Thread<E>& g, const Thread<E>& h) {
  if (!h.constant) fail(ErrorKind::ValidationError, "the second operand must be a constant thread");
  const IterationSystem<E>* sys = &s;
  const std::size_t support = h.constant->support;
  const E seed = h.constant->seed;
  Thread<E> t;
  t.at = [sys, g, support, seed](std::size_t b) {
    if (b >= support) return g.at(b) & sys->embed(support, b, seed);
    return sys->retract(b, support, g.at(support) & seed);
  };
  if (g.constant) {
    const std::size_t top = std::max(support, g.constant->support);
    t.constant = ConstantSeed<E>{top, s.embed(g.constant->support, top, g.constant->seed) & s.embed(support, top, seed)};
  }
  t.label = g.label + " & " + h.label;
  return t;
}

template <class E>
AuditResult antichain_sup_audit(const IterationSystem<E>& s, const std::vector<Thread<E>>& threads, std::size_t stage,
                                std::size_t depth, const std::vector<Thread<E>>& candidates, std::uint64_t seed) {
  const std::size_t m = s.stages_to(depth);
  if (stage >= m) fail(ErrorKind::ValidationError, "stage " + std::to_string(stage) + " is beyond the audit depth");
  std::vector<E> proj;
  for (const auto& f : threads) proj.push_back(f.at(stage));
  for (std::size_t i = 0; i < proj.size(); ++i) {
    for (std::size_t j = i + 1; j < proj.size(); ++j) {
      if (!is_zero(proj[i] & proj[j])) {
        fail(ErrorKind::NotAntichainAtStage,
             "stage " + std::to_string(stage) + ": threads " + std::to_string(i) + " and " + std::to_string(j) + " meet");
      }
    }
  }
  AuditResult r;
  r.audit = "antichain-sup";
  const Thread<E> sup = pointwise_sup(s, threads);
  const auto sup_c = coordinates(sup, m);
  std::vector<std::vector<E>> fc;
  for (const auto& f : threads) fc.push_back(coordinates(f, m));

  CheckBuilder is_thread("the pointwise sup is a thread"), upper("the pointwise sup is an upper bound");
  try {
    thread_validate(s, sup, depth);
    is_thread.expect(true);
  } catch (const Error& e) {
    is_thread.expect(false, e.what());
  }
  for (std::size_t k = 0; k < fc.size(); ++k) upper.expect(leq_to(fc[k], sup_c), "thread " + std::to_string(k));
  r.checks.push_back(is_thread.done());
  r.checks.push_back(upper.done());

  std::vector<Thread<E>> pool = candidates;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < m; ++t) {
    for (const auto& x : s.sample(t, rng, 16)) {
      if (!is_zero(x)) pool.push_back(constant_thread(s, t, x));
    }
  }

  CheckBuilder meets("a nonzero h below the sup meets some f_k at the stage");
  CheckBuilder refine("h & i(f_k(stage)) is a nonzero thread below h and f_k");
  CheckBuilder least("no constant upper bound lies strictly below the sup");
  std::size_t below_sup = 0;
  for (const auto& h : pool) {
    const auto hc = coordinates(h, m);
    if (leq_to(hc, sup_c) && !is_zero(hc[stage])) {
      ++below_sup;
      std::size_t k = proj.size();
      for (std::size_t i = 0; i < proj.size() && k == proj.size(); ++i) {
        if (!is_zero(hc[stage] & proj[i])) k = i;
      }
      if (!meets.expect(k < proj.size(), h.label)) continue;
      std::vector<E> refined(m);
      for (std::size_t b = 0; b < m; ++b) {
        refined[b] = b >= stage ? hc[b] & s.embed(stage, b, proj[k]) : s.retract(b, stage, hc[stage] & proj[k]);
      }
      bool coherent = true;
      for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t a = 0; a <= b; ++a) coherent = coherent && s.retract(a, b, refined[b]) == refined[a];
      }
      refine.expect_lazy(coherent && !is_zero(refined[0]) && leq_to(refined, hc) && leq_to(refined, fc[k]),
                         [&] { return h.label + " with f_" + std::to_string(k); });
    }
    bool bound = true;
    for (const auto& f : fc) bound = bound && leq_to(f, hc);
    if (bound) least.expect_lazy(leq_to(sup_c, hc), [&] { return h.label; });
  }
  r.checks.push_back(meets.done());
  r.checks.push_back(refine.done());
  r.checks.push_back(least.done());
  r.facts["depth"] = std::to_string(m - 1);
  r.facts["candidates-below-sup"] = std::to_string(below_sup);
  return r;
}

AuditResult direct_limit_correspondence_audit(const FiniteSystem& s) {
  if (!s.length()) fail(ErrorKind::NotEager, "the correspondence audit needs a finite-length system");
  const std::size_t last = *s.length() - 1;
  const FiniteCBA& L = s.algebra(last);
  if (L.atom_count() > 6) fail(ErrorKind::TooManyAtoms, "last algebra has more than 6 atoms");
  AuditResult r;
  r.audit = "direct-limit";

  // Threads, each as its full coordinate vector; the nonzero ones are C(F)^+.
  std::vector<Element> xs;
  std::vector<std::vector<Element>> threads;
  for (const auto& x : L.elements()) {
    xs.push_back(x);
    threads.push_back(coordinates(from_last(s, x), last + 1));
  }
  CheckBuilder constant("every thread is constant");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto c = constant_thread(s, last, xs[k]);
    constant.expect_lazy(coordinates(c, last + 1) == threads[k], [&] { return xs[k].to_string(); });
  }
  r.checks.push_back(constant.done());

  std::vector<std::size_t> points;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k].any()) points.push_back(k);
  }
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> leq(points.size(), std::vector<bool>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    labels.push_back(xs[points[p]].to_string());
    for (std::size_t q = 0; q < points.size(); ++q) leq[p][q] = leq_to(threads[points[p]], threads[points[q]]);
  }
  const Poset P(labels, leq);
  const Completion ro = boolean_completion(P);
  const FiniteCBA& D = ro.algebra;

  auto k_of = [&](const Element& U) {
    Element out = L.zero();
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (ro.embedding[p].leq(U)) out |= threads[points[p]][last];
    }
    return out;
  };
  auto k_inv = [&](std::size_t f) {
    Element out = D.zero();
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (leq_to(threads[points[p]], threads[f])) out |= ro.embedding[p];
    }
    return out;
  };

  CheckBuilder sizes("RO(C(F)) has as many atoms as the last algebra");
  sizes.expect(D.atom_count() == L.atom_count(), std::to_string(D.atom_count()) + " atoms");
  r.checks.push_back(sizes.done());
  for (auto c : audit_completion(P, ro).checks) {
    c.law = "completion: " + c.law;
    r.checks.push_back(std::move(c));
  }

  CheckBuilder left("k^-1(k(U)) = U"), right("k(k^-1(f)) = f"), monotone("U <= V iff k(U) <= k(V)");
  const auto us = D.elements();
  for (const auto& U : us) {
    const Element f = k_of(U);
    const auto it = std::find(xs.begin(), xs.end(), f);
    left.expect_lazy(k_inv(static_cast<std::size_t>(it - xs.begin())) == U, [&] { return U.to_string(); });
    for (const auto& V : us) {
      monotone.expect_lazy(U.leq(V) == k_of(U).leq(k_of(V)), [&] { return U.to_string() + " vs " + V.to_string(); });
    }
  }
  for (std::size_t f = 0; f < xs.size(); ++f) {
    right.expect_lazy(k_of(k_inv(f)) == xs[f], [&] { return xs[f].to_string(); });
  }
  for (auto* b : {&left, &right, &monotone}) r.checks.push_back(b->done());
  r.facts["completion-atoms"] = std::to_string(D.atom_count());
  r.facts["threads"] = std::to_string(xs.size());
  return r;
}

template <class E>
LowerBound<E> direct_limit_lower_bound(const IterationSystem<E>& s, const Thread<E>& f, std::size_t depth) {
  const std::size_t m = s.stages_to(depth);
  const std::size_t top = s.stages_to(depth + 1);
  const auto fc = coordinates(f, top);
  LowerBound<E> out;
  out.depth = m - 1;
  for (std::size_t n = 0; n < m; ++n) out.coordinates.push_back(s.zero(n));
  for (std::size_t t = 0; t < m; ++t) {
    // the largest seed at stage t whose constant thread stays below f
    E b = fc[t];
    for (std::size_t beta = t; beta < top; ++beta) b = b & s.dual_retract(t, beta, fc[beta]);
    bool equal = true;
    for (std::size_t n = 0; n < top; ++n) {
      const E g = n >= t ? s.embed(t, n, b) : s.retract(n, t, b);
      if (n < m) out.coordinates[n] = out.coordinates[n] | g;
      equal = equal && g == fc[n];
    }
    if (equal && !out.reached_at) out.reached_at = t;
  }
  bool lower_zero = true, f_zero = true;
  for (std::size_t n = 0; n < m; ++n) {
    lower_zero = lower_zero && is_zero(out.coordinates[n]);
    f_zero = f_zero && is_zero(fc[n]);
  }
  out.gap = lower_zero && !f_zero;
  return out;
}

std::string to_string(RcsVerdict v) {
  switch (v) {
    case RcsVerdict::Member: return "member";
    case RcsVerdict::NonMember: return "non-member";
    case RcsVerdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

template <class E>
RcsResult rcs_membership(const IterationSystem<E>& s, const Thread<E>& f, const CofinalityOracle<E>& oracle,
                         std::size_t depth) {
  thread_validate(s, f, depth);
  const std::size_t m = s.stages_to(depth);
  if (s.length()) return {RcsVerdict::Member, "finite length: every thread is constant", m - 1};
  if (is_zero(f.at(0))) return {RcsVerdict::Member, "the zero thread is constant", m - 1};
  if (f.constant) {
    const Thread<E> c = constant_thread(s, f.constant->support, f.constant->seed);
    if (coordinates(c, m) == coordinates(f, m)) {
      return {RcsVerdict::Member, "constant with support " + std::to_string(c.constant->support), m - 1};
    }
  }
  bool all_refute = true;
  for (std::size_t a = 0; a < m; ++a) {
    const Cofinality v = oracle(a, f.at(a));
    if (v == Cofinality::ForcesCountable) {
      return {RcsVerdict::Member, "f(" + std::to_string(a) + ") forces countable cofinality", m - 1};
    }
    all_refute = all_refute && v == Cofinality::Refutes;
  }
  if (all_refute) return {RcsVerdict::NonMember, "not constant and refuted at every stage to depth", m - 1};
  return {RcsVerdict::Indeterminate, "the oracle is undecided", m - 1};
}

// ---- quotients and reindexing

QuotientSystem quotient_system(const FiniteSystem& s, std::size_t gamma, std::size_t atom) {
  if (!s.length()) fail(ErrorKind::NotEager, "quotient systems need a finite-length system");
  const std::size_t n = *s.length();
  if (gamma >= n) fail(ErrorKind::ArityMismatch, "no stage " + std::to_string(gamma));
  if (atom >= s.algebra(gamma).atom_count()) fail(ErrorKind::ArityMismatch, "no atom " + std::to_string(atom));
  QuotientSystem q{gamma, atom, {}, std::nullopt};
  const Element u = s.algebra(gamma).atom(atom);
  for (std::size_t a = gamma + 1; a < n; ++a) q.stages.emplace_back(s.algebra(a), s.embed(gamma, a, u));
  if (q.stages.empty()) return q;
  std::vector<FiniteCBA> algebras;
  std::vector<FiniteSystem::StageMap> maps;
  for (std::size_t k = 0; k < q.stages.size(); ++k) {
    algebras.push_back(q.stages[k].algebra());
    if (k + 1 < q.stages.size()) {
      const std::size_t a = gamma + 1 + k;
      const Triangle t = make_triangle(s.map(gamma, a), s.map(gamma, a + 1), s.map(a, a + 1));
      maps.push_back({k, k + 1, quotient_hom(t, atom).hom});
    }
  }
  q.system = FiniteSystem::build(std::move(algebras), maps);
  return q;
}

Thread<Element> quotient_thread_representative(const FiniteSystem& s, std::size_t gamma,
                                               const std::vector<std::vector<Element>>& families) {
  if (!s.length()) fail(ErrorKind::NotEager, "quotient systems need a finite-length system");
  const std::size_t n = *s.length();
  if (gamma + 1 >= n) fail(ErrorKind::ValidationError, "no stages above " + std::to_string(gamma));
  const FiniteCBA& G = s.algebra(gamma);
  if (families.size() != G.atom_count()) fail(ErrorKind::ArityMismatch, "one quotient thread per atom of the stage");
  Element top = s.algebra(n - 1).zero();
  for (std::size_t u = 0; u < families.size(); ++u) {
    const QuotientSystem q = quotient_system(s, gamma, u);
    if (families[u].size() != q.stages.size()) {
      fail(ErrorKind::ArityMismatch, "quotient thread at atom " + std::to_string(u) + " has the wrong length");
    }
    const auto& c = families[u];
    for (std::size_t b = 0; b < c.size(); ++b) {
      if (!q.system->contains(b, c[b])) fail(ErrorKind::MixedAlgebras, "quotient coordinate out of its algebra");
      for (std::size_t a = 0; a <= b; ++a) {
        if (!(q.system->retract(a, b, c[b]) == c[a])) {
          fail(ErrorKind::CoherenceFailure, "atom " + std::to_string(u) + " " + pair_string(gamma + 1 + a, gamma + 1 + b));
        }
      }
    }
    top |= q.stages.back().lift(c.back());
  }
  Thread<Element> t = from_last(s, top);
  t.label = "representative";
  return t;
}

AuditResult quotient_thread_audit(const FiniteSystem& s, std::size_t gamma, std::uint64_t seed) {
  if (!s.length()) fail(ErrorKind::NotEager, "quotient systems need a finite-length system");
  const std::size_t n = *s.length();
  AuditResult r;
  r.audit = "quotient-thread";
  std::mt19937_64 rng(seed);
  const FiniteCBA& G = s.algebra(gamma);
  std::vector<QuotientSystem> qs;
  for (std::size_t u = 0; u < G.atom_count(); ++u) qs.push_back(quotient_system(s, gamma, u));

  CheckBuilder regular("quotient stages form an iteration system");
  for (const auto& q : qs) {
    if (q.system) regular.expect(system_audit(*q.system, n).passed(), "atom " + std::to_string(q.atom));
  }
  r.checks.push_back(regular.done());

  CheckBuilder is_thread("the representative is a thread"), classes("it has the given classes");
  CheckBuilder unique("it is the only thread with those classes");
  const auto xs = s.sample(n - 1, rng, 48);
  for (const auto& x : xs) {
    const Thread<Element> g0 = from_last(s, x);
    std::vector<std::vector<Element>> families;
    for (const auto& q : qs) {
      std::vector<Element> fam;
      for (std::size_t k = 0; k < q.stages.size(); ++k) fam.push_back(q.stages[k].lower(g0.at(gamma + 1 + k)));
      families.push_back(std::move(fam));
    }
    const Thread<Element> g = quotient_thread_representative(s, gamma, families);
    try {
      thread_validate(s, g, n);
      is_thread.expect(true);
    } catch (const Error& e) {
      is_thread.expect(false, e.what());
    }
    bool match = true;
    for (std::size_t u = 0; u < qs.size(); ++u) {
      for (std::size_t k = 0; k < qs[u].stages.size(); ++k) {
        match = match && qs[u].stages[k].lower(g.at(gamma + 1 + k)) == families[u][k];
      }
    }
    classes.expect_lazy(match, [&] { return x.to_string(); });
    unique.expect_lazy(g.at(n - 1) == x, [&] { return x.to_string() + " gave " + g.at(n - 1).to_string(); });
  }
  for (auto* b : {&is_thread, &classes, &unique}) r.checks.push_back(b->done());
  r.facts["gamma"] = std::to_string(gamma);
  return r;
}

FiniteSystem reindex(const FiniteSystem& s, const std::vector<std::size_t>& stages) {
  if (!s.length()) fail(ErrorKind::NotEager, "reindexing needs a finite-length system");
  if (stages.empty() || stages.back() + 1 != *s.length()) {
    fail(ErrorKind::ValidationError, "the index map must reach the last stage");
  }
  std::vector<FiniteCBA> algebras;
  std::vector<FiniteSystem::StageMap> maps;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    if (k > 0 && stages[k] <= stages[k - 1]) fail(ErrorKind::ValidationError, "the index map must be increasing");
    algebras.push_back(s.algebra(stages[k]));
    if (k > 0) maps.push_back({k - 1, k, s.map(stages[k - 1], stages[k])});
  }
  return FiniteSystem::build(std::move(algebras), maps);
}

AuditResult reindex_audit(const FiniteSystem& s, const std::vector<std::size_t>& stages, std::uint64_t seed) {
  const FiniteSystem t = reindex(s, stages);
  AuditResult r;
  r.audit = "reindex";
  std::mt19937_64 rng(seed);
  const std::size_t n = *s.length();
  CheckBuilder restricts("restricting a thread gives a thread"), recovers("the restriction determines the thread");
  CheckBuilder verdicts("membership verdicts agree");
  for (const auto& x : s.sample(n - 1, rng, 48)) {
    const Thread<Element> f = from_last(s, x);
    std::vector<Element> sub;
    for (auto a : stages) sub.push_back(f.at(a));
    const Thread<Element> g = eager_thread(sub);
    try {
      thread_validate(t, g, stages.size());
      restricts.expect(true);
    } catch (const Error& e) {
      restricts.expect(false, e.what());
    }
    const Thread<Element> back = from_last(s, g.at(stages.size() - 1));
    recovers.expect_lazy(coordinates(back, n) == coordinates(f, n), [&] { return x.to_string(); });
    const auto oracle = [](std::size_t, const Element&) { return Cofinality::Unknown; };
    verdicts.expect_lazy(rcs_membership<Element>(s, f, oracle, n).verdict ==
                             rcs_membership<Element>(t, g, oracle, stages.size()).verdict,
                         [&] { return x.to_string(); });
  }
  for (auto* b : {&restricts, &recovers, &verdicts}) r.checks.push_back(b->done());
  return r;
}

#define FORCING_INSTANTIATE(E)                                                                                         \
  template AuditResult system_audit<E>(const IterationSystem<E>&, std::size_t, std::uint64_t, std::size_t);          \
  template Thread<E> constant_thread<E>(const IterationSystem<E>&, std::size_t, const E&);                          \
  template ThreadCertificate thread_validate<E>(const IterationSystem<E>&, const Thread<E>&, std::size_t);          \
  template Thread<E> pointwise_sup<E>(const IterationSystem<E>&, const std::vector<Thread<E>>&);                    \
  template Thread<E> meet_with_constant<E>(const IterationSystem<E>&, const Thread<E>&, const Thread<E>&);          \
  template AuditResult antichain_sup_audit<E>(const IterationSystem<E>&, const std::vector<Thread<E>>&, std::size_t, \
                                              std::size_t, const std::vector<Thread<E>>&, std::uint64_t);          \
  template LowerBound<E> direct_limit_lower_bound<E>(const IterationSystem<E>&, const Thread<E>&, std::size_t);     \
  template RcsResult rcs_membership<E>(const IterationSystem<E>&, const Thread<E>&, const CofinalityOracle<E>&,     \
                                       std::size_t);

FORCING_INSTANTIATE(Element)
FORCING_INSTANTIATE(FreeElement)

#undef FORCING_INSTANTIATE

}  // namespace forcing
