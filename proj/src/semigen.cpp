#include "forcing/semigen.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>

#include "forcing/errors.hpp"
#include "forcing/two_step.hpp"

namespace forcing {

namespace {

constexpr std::size_t kExhaustiveLimit = 12;

using ElementSet = std::unordered_set<Element, ElementHash>;

ElementSet carrier_set(const ModelTrace& t) { return ElementSet(t.carrier.begin(), t.carrier.end()); }

std::string index_string(const char* what, std::size_t k) { return std::string(what) + " " + std::to_string(k); }

std::string family_string(const std::vector<Element>& xs) {
  std::string s = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + xs[k].to_string();
  return s + "]";
}

Element join_in(const FiniteCBA& alg, const std::vector<Element>& d, const ElementSet& m) {
  Element j = alg.zero();
  for (const auto& x : d) {
    if (m.count(x)) j |= x;
  }
  return j;
}

// Meet of join(D & M) over the given families.
Element meet_of_joins(const FiniteCBA& alg, const std::vector<const std::vector<Element>*>& families,
                      const ElementSet& m) {
  Element s = alg.one();
  for (const auto* d : families) s &= join_in(alg, *d, m);
  return s;
}

std::vector<const std::vector<Element>*> all_designated(const ModelTrace& t) {
  std::vector<const std::vector<Element>*> out;
  for (const auto& d : t.designated_predense) out.push_back(&d);
  for (const auto& a : t.designated_antichains) out.push_back(&a);
  return out;
}

void check_members(const ModelTrace& t, const std::vector<Element>& xs, const std::string& where) {
  for (const auto& x : xs) {
    if (!t.algebra.contains(x)) fail(ErrorKind::MixedAlgebras, where + " has an element of another algebra");
  }
}

void validate_name(const ModelTrace& t, const OrdinalName& name, std::size_t k) {
  if (name.antichain.size() != name.labels.size()) {
    fail(ErrorKind::ArityMismatch, index_string("ordinal name", k) + " has " + std::to_string(name.labels.size()) +
                                       " labels for " + std::to_string(name.antichain.size()) + " cells");
  }
  check_members(t, name.antichain, index_string("ordinal name", k));
  if (!is_maximal_antichain(t.algebra, name.antichain)) {
    fail(ErrorKind::NotMaximal, index_string("ordinal name", k) + " is not on a maximal antichain");
  }
  for (auto l : name.labels) {
    if (l >= t.kappa) {
      fail(ErrorKind::LabelOutOfRange,
           index_string("ordinal name", k) + " has label " + std::to_string(l) + " >= kappa " + std::to_string(t.kappa));
    }
  }
}

void validate_antichains(const ModelTrace& t) {
  for (std::size_t k = 0; k < t.designated_antichains.size(); ++k) {
    check_members(t, t.designated_antichains[k], index_string("antichain", k));
    if (!is_maximal_antichain(t.algebra, t.designated_antichains[k])) {
      fail(ErrorKind::NotMaximal, index_string("antichain", k));
    }
  }
}

void validate_predense(const ModelTrace& t) {
  for (std::size_t k = 0; k < t.designated_predense.size(); ++k) {
    check_members(t, t.designated_predense[k], index_string("predense set", k));
    if (!is_predense(t.algebra, t.designated_predense[k])) fail(ErrorKind::NotPredense, index_string("predense set", k));
  }
}

// Witness of an element d & b in M not matched by any d' in D & M.
std::optional<std::string> restriction_gap(const ModelTrace& t, const ElementSet& m, const Element& b) {
  for (const auto* d : all_designated(t)) {
    for (const auto& x : *d) {
      const Element xb = x & b;
      if (!m.count(xb)) continue;
      const bool matched =
          std::any_of(d->begin(), d->end(), [&](const Element& y) { return m.count(y) && (y & b) == xb; });
      if (!matched) return x.to_string() + " & " + b.to_string() + " in M with no match in " + family_string(*d);
    }
  }
  return std::nullopt;
}

// a_k in M but b_k not.
std::optional<std::string> disjointification_gap(const ModelTrace& t, const ElementSet& m) {
  for (const auto& d : t.designated_predense) {
    Element seen = t.algebra.zero();
    for (const auto& x : d) {
      const Element a = x.minus(seen);
      seen |= x;
      if (a.any() && m.count(a) && !m.count(x)) return a.to_string() + " in M but " + x.to_string() + " not";
    }
  }
  return std::nullopt;
}

bool same_members(std::vector<Element> a, std::vector<Element> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

void prefixed(const AuditResult& inner, const std::string& prefix, AuditResult& into) {
  for (auto c : inner.checks) {
    c.law = prefix + c.law;
    into.checks.push_back(std::move(c));
  }
  for (const auto& [k, v] : inner.facts) into.facts[prefix + k] = v;
}

}  // namespace

bool ModelTrace::in_carrier(const Element& x) const { return std::find(carrier.begin(), carrier.end(), x) != carrier.end(); }

void validate_trace(const ModelTrace& t) {
  check_members(t, t.carrier, "carrier");
  validate_predense(t);
  validate_antichains(t);
  if (t.kappa == 0 || t.delta > t.kappa) {
    fail(ErrorKind::ValidationError,
         "delta " + std::to_string(t.delta) + " must lie within kappa " + std::to_string(t.kappa));
  }
  for (std::size_t k = 0; k < t.ordinal_names.size(); ++k) validate_name(t, t.ordinal_names[k], k);
}

Element sg_value(const ModelTrace& t) {
  validate_predense(t);
  validate_antichains(t);
  return meet_of_joins(t.algebra, all_designated(t), carrier_set(t));
}

Element gen_value(const ModelTrace& t) {
  validate_antichains(t);
  std::vector<const std::vector<Element>*> fams;
  for (const auto& a : t.designated_antichains) fams.push_back(&a);
  return meet_of_joins(t.algebra, fams, carrier_set(t));
}

std::vector<Element> disjointify(const FiniteCBA& algebra, const std::vector<Element>& list) {
  for (const auto& x : list) {
    if (!algebra.contains(x)) fail(ErrorKind::MixedAlgebras, "list has an element of another algebra");
  }
  if (!is_predense(algebra, list)) fail(ErrorKind::NotPredense, "list joins to less than 1");
  std::vector<Element> out;
  Element seen = algebra.zero();
  for (const auto& x : list) {
    const Element a = x.minus(seen);
    seen |= x;
    if (a.any()) out.push_back(a);
  }
  return out;
}

AuditResult disjointification_audit(const ModelTrace& t) {
  validate_trace(t);
  AuditResult r;
  r.audit = "disjointification";
  const ElementSet m = carrier_set(t);

  ModelTrace closed = t;
  CheckBuilder maximal("A_D is a maximal antichain");
  CheckBuilder refines("a_k <= b_k");
  for (const auto& d : t.designated_predense) {
    const auto a = disjointify(t.algebra, d);
    maximal.expect(is_maximal_antichain(t.algebra, a), family_string(d));
    Element seen = t.algebra.zero();
    for (const auto& x : d) {
      const Element ak = x.minus(seen);
      seen |= x;
      refines.expect_lazy(ak.leq(x), [&] { return x.to_string(); });
    }
    closed.designated_antichains.push_back(a);
  }
  r.checks.push_back(maximal.done());
  r.checks.push_back(refines.done());

  const Element sg = sg_value(closed);
  const Element gen = gen_value(closed);
  CheckBuilder below("sg <= gen");
  below.expect(sg.leq(gen), sg.to_string() + " vs " + gen.to_string());
  r.checks.push_back(below.done());

  if (const auto gap = disjointification_gap(t, m)) {
    r.facts["closure-gap"] = *gap;
  } else {
    r.facts["closure-gap"] = "none";
    CheckBuilder equal("sg from predense sets = sg from antichains");
    equal.expect(sg == gen, sg.to_string() + " vs " + gen.to_string());
    r.checks.push_back(equal.done());
  }
  r.facts["sg"] = sg.to_string();
  return r;
}

ModelTrace restrict_trace(const ModelTrace& t, const Element& b) {
  if (!t.algebra.contains(b)) fail(ErrorKind::MixedAlgebras, "restriction point is in another algebra");
  if (b.none() || !t.in_carrier(b)) fail(ErrorKind::NotInCarrier, b.to_string() + " is not a nonzero element of M");
  const Relativization rel(t.algebra, b);
  ModelTrace out;
  out.algebra = rel.algebra();
  out.kappa = t.kappa;
  out.delta = t.delta;
  ElementSet seen;
  for (const auto& x : t.carrier) {
    const Element y = rel.lower(x);
    if (seen.insert(y).second) out.carrier.push_back(y);
  }
  const auto lower_all = [&](const std::vector<Element>& d) {
    std::vector<Element> o;
    for (const auto& x : d) o.push_back(rel.lower(x));
    return o;
  };
  for (const auto& d : t.designated_predense) out.designated_predense.push_back(lower_all(d));
  // Met with b an antichain may pick up zeros; it stays predense.
  for (const auto& a : t.designated_antichains) out.designated_predense.push_back(lower_all(a));
  return out;
}

AuditResult restriction_audit(const ModelTrace& t, const Element& b) {
  validate_trace(t);
  const ModelTrace low = restrict_trace(t, b);
  const Relativization rel(t.algebra, b);
  AuditResult r;
  r.audit = "restriction";

  CheckBuilder predense("D & b is predense below b");
  for (const auto& d : low.designated_predense) predense.expect(is_predense(low.algebra, d), family_string(d));
  r.checks.push_back(predense.done());

  CheckBuilder upward("(D & b) + ~b is predense in B");
  for (const auto& d : low.designated_predense) {
    std::vector<Element> up;
    for (const auto& x : d) up.push_back(rel.lift(x));
    up.push_back(~b);
    upward.expect(is_predense(t.algebra, up), family_string(up));
  }
  r.checks.push_back(upward.done());

  const Element whole = sg_value(t) & b;
  const Element local = rel.lift(sg_value(low));
  CheckBuilder ge("sg(B, M) & b <= sg(B|b, M)");
  ge.expect(whole.leq(local), whole.to_string() + " vs " + local.to_string());
  r.checks.push_back(ge.done());

  if (const auto gap = restriction_gap(t, carrier_set(t), b)) {
    r.facts["closure-gap"] = *gap;
  } else {
    r.facts["closure-gap"] = "none";
    CheckBuilder eq("sg(B|b, M) = sg(B, M) & b");
    eq.expect(whole == local, whole.to_string() + " vs " + local.to_string());
    r.checks.push_back(eq.done());
  }
  r.facts["sg-restricted"] = local.to_string();
  return r;
}

OrdinalName ordinal_name_of(const ModelTrace& t, const std::vector<Element>& antichain) {
  check_members(t, antichain, "antichain");
  if (!is_maximal_antichain(t.algebra, antichain)) fail(ErrorKind::NotMaximal, family_string(antichain));
  OrdinalName name;
  name.antichain = antichain;
  std::size_t inside = 0;
  std::size_t outside = t.delta;
  for (const auto& a : antichain) name.labels.push_back(t.in_carrier(a) ? inside++ : outside++);
  if (inside > t.delta || outside > t.kappa) {
    fail(ErrorKind::LabelOutOfRange, family_string(antichain) + " needs " + std::to_string(inside) +
                                         " labels below delta and " + std::to_string(outside - t.delta) +
                                         " from delta to kappa");
  }
  return name;
}

std::vector<Element> antichain_of(const ModelTrace& t, const OrdinalName& name) {
  validate_name(t, name, 0);
  std::vector<Element> out;
  for (std::size_t beta = 0; beta < t.kappa; ++beta) {
    Element level = t.algebra.zero();
    for (std::size_t k = 0; k < name.antichain.size(); ++k) {
      if (name.labels[k] == beta) level |= name.antichain[k];
    }
    if (level.any()) out.push_back(level);
  }
  return out;
}

Element below_delta(const ModelTrace& t, const OrdinalName& name) {
  validate_name(t, name, 0);
  Element s = t.algebra.zero();
  for (std::size_t k = 0; k < name.antichain.size(); ++k) {
    if (name.labels[k] < t.delta) s |= name.antichain[k];
  }
  return s;
}

AuditResult semigeneric_sup_audit(const ModelTrace& t) {
  validate_trace(t);
  AuditResult r;
  r.audit = "semigeneric-sup";
  const ElementSet m = carrier_set(t);

  // A level set of a name in M is in M exactly when its ordinal is.
  CheckBuilder levels("name levels lie in M exactly below delta");
  std::vector<std::vector<Element>> antichains = t.designated_antichains;
  std::vector<OrdinalName> names = t.ordinal_names;
  for (const auto& name : t.ordinal_names) {
    for (std::size_t beta = 0; beta < t.kappa; ++beta) {
      Element level = t.algebra.zero();
      for (std::size_t k = 0; k < name.antichain.size(); ++k) {
        if (name.labels[k] == beta) level |= name.antichain[k];
      }
      if (level.any()) {
        levels.expect_lazy(m.count(level) == (beta < t.delta),
                           [&] { return level.to_string() + " at " + std::to_string(beta); });
      }
    }
    antichains.push_back(antichain_of(t, name));
  }
  r.checks.push_back(levels.done());

  CheckBuilder round("antichain -> name -> antichain");
  CheckBuilder value("[[name_A < delta]] = join(A & M)");
  for (const auto& a : t.designated_antichains) {
    OrdinalName name = ordinal_name_of(t, a);
    round.expect(same_members(antichain_of(t, name), a), family_string(a));
    value.expect(below_delta(t, name) == join_in(t.algebra, a, m), family_string(a));
    names.push_back(std::move(name));
  }
  r.checks.push_back(round.done());
  r.checks.push_back(value.done());

  std::vector<const std::vector<Element>*> fams;
  for (const auto& a : antichains) fams.push_back(&a);
  const Element from_antichains = meet_of_joins(t.algebra, fams, m);

  std::vector<Element> bounds;
  for (const auto& name : names) bounds.push_back(below_delta(t, name));
  const auto semigeneric = [&](const Element& q) {
    return std::all_of(bounds.begin(), bounds.end(), [&](const Element& x) { return q.leq(x); });
  };
  Element sup = t.algebra.zero();
  std::size_t count = 0;
  const std::size_t n = t.algebra.atom_count();
  if (n <= kExhaustiveLimit) {
    for (const auto& q : t.algebra.elements()) {
      if (q.any() && semigeneric(q)) {
        sup |= q;
        ++count;
      }
    }
  } else {
    // Every q is a join of atoms, so the atoms decide the supremum.
    for (std::size_t k = 0; k < n; ++k) {
      if (semigeneric(t.algebra.atom(k))) {
        sup |= t.algebra.atom(k);
        ++count;
      }
    }
  }
  CheckBuilder eq("sg from antichains = sup of semigeneric q");
  eq.expect(from_antichains == sup, from_antichains.to_string() + " vs " + sup.to_string());
  r.checks.push_back(eq.done());
  CheckBuilder self("the supremum is semigeneric");
  self.expect(sup.none() || semigeneric(sup), sup.to_string());
  r.checks.push_back(self.done());
  r.facts["sg"] = from_antichains.to_string();
  r.facts["semigeneric-conditions"] = std::to_string(count);
  return r;
}

AuditResult sp_identity_audit(const CompleteHom& h, const ModelTrace& source, const ModelTrace& target) {
  if (!(source.algebra == h.source()) || !(target.algebra == h.target())) {
    fail(ErrorKind::MixedAlgebras, "traces do not sit on the homomorphism's algebras");
  }
  const Element sb = sg_value(source);
  const Element sc = sg_value(target);
  AuditResult r;
  r.audit = "sp-identity";
  CheckBuilder identity("pi(c & sg(C, M)) = pi(c) & sg(B, M)");
  for (const auto& c : target.carrier) {
    identity.expect_lazy(h.retract(c & sc) == (h.retract(c) & sb), [&] { return c.to_string(); });
  }
  r.checks.push_back(identity.done());
  CheckBuilder meets("sg(B, M) meets every nonzero b in M");
  for (const auto& b : source.carrier) {
    if (b.any()) meets.expect_lazy((sb & b).any(), [&] { return b.to_string(); });
  }
  r.checks.push_back(meets.done());
  r.facts["sg-source"] = sb.to_string();
  r.facts["sg-target"] = sc.to_string();
  return r;
}

namespace {

// Random partition of the atoms into nonempty cells.
std::vector<Element> random_partition(std::mt19937_64& rng, std::size_t atoms, std::size_t max_cells) {
  const std::size_t cells = 1 + rng() % std::max<std::size_t>(1, std::min(max_cells, atoms));
  std::vector<Element> out(cells, Element(atoms));
  for (std::size_t k = 0; k < atoms; ++k) out[k < cells ? k : rng() % cells].set(k);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

// Unions of cells.
std::vector<Element> unions_of(const std::vector<Element>& cells, std::size_t atoms) {
  std::vector<Element> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells.size()); ++mask) {
    Element e(atoms);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if ((mask >> k) & 1U) e |= cells[k];
    }
    out.push_back(e);
  }
  return out;
}

// Either a union of cells (an element of M) or a set meeting every cell in a
// proper part where possible.
Element random_member(std::mt19937_64& rng, const std::vector<Element>& cells, std::size_t atoms) {
  Element e(atoms);
  if (rng() % 2) {
    for (const auto& c : cells) {
      if (rng() % 2) e |= c;
    }
    return e;
  }
  for (const auto& c : cells) {
    const auto at = c.atoms();
    const std::size_t keep = at.size() > 1 ? 1 + rng() % (at.size() - 1) : rng() % 2;
    for (std::size_t k = 0; k < keep; ++k) e.set(at[k]);
  }
  return e;
}

ModelTrace draw_trace(std::mt19937_64& rng, std::size_t atoms) {
  ModelTrace t;
  t.algebra = FiniteCBA(atoms);
  const auto cells = random_partition(rng, atoms, 4);
  t.carrier = unions_of(cells, atoms);
  const std::size_t predense = rng() % 3;
  for (std::size_t k = 0; k < predense; ++k) {
    std::vector<Element> d;
    const std::size_t size = 1 + rng() % 3;
    Element j(atoms);
    for (std::size_t s = 0; s < size; ++s) {
      d.push_back(random_member(rng, cells, atoms));
      j |= d.back();
    }
    if (!j.all()) d[rng() % d.size()] |= ~j;
    t.designated_predense.push_back(std::move(d));
  }
  const std::size_t antichains = rng() % 3;
  for (std::size_t k = 0; k < antichains; ++k) {
    // Refine a random partition so that some cells leave M.
    std::vector<Element> a;
    for (const auto& p : random_partition(rng, atoms, 4)) {
      const auto at = p.atoms();
      if (at.size() > 1 && rng() % 2) {
        Element left(atoms);
        left.set(at[0]);
        a.push_back(left);
        a.push_back(p.minus(left));
      } else {
        a.push_back(p);
      }
    }
    t.designated_antichains.push_back(std::move(a));
  }
  std::size_t inside = 0;
  std::size_t outside = 0;
  for (const auto& a : t.designated_antichains) {
    std::size_t in = 0;
    for (const auto& x : a) in += t.in_carrier(x) ? 1 : 0;
    inside = std::max(inside, in);
    outside = std::max(outside, a.size() - in);
  }
  t.delta = std::max<std::size_t>(1 + rng() % 2, inside);
  t.kappa = t.delta + std::max<std::size_t>(rng() % 3, outside);
  // Names on the carrier's own cells, labelled consistently with M.
  if (rng() % 2) {
    OrdinalName name;
    std::size_t next = 0;
    for (const auto& c : cells) {
      name.antichain.push_back(c);
      name.labels.push_back(next < t.delta ? next++ : rng() % t.delta);
    }
    t.ordinal_names.push_back(std::move(name));
  }
  return t;
}

bool preconditions_hold(const ModelTrace& t) {
  const ElementSet m = carrier_set(t);
  if (disjointification_gap(t, m)) return false;
  for (const auto& b : t.carrier) {
    if (b.any() && restriction_gap(t, m, b)) return false;
  }
  return true;
}

}  // namespace

ModelTrace random_model_trace(std::mt19937_64& rng, std::size_t atoms) {
  if (atoms == 0 || atoms > kExhaustiveLimit) {
    fail(ErrorKind::TooManyAtoms, "random traces take 1.." + std::to_string(kExhaustiveLimit) + " atoms");
  }
  for (int attempt = 0; attempt < 256; ++attempt) {
    ModelTrace t = draw_trace(rng, atoms);
    if (preconditions_hold(t)) return t;
  }
  // Designations inside M are always closed.
  ModelTrace t = draw_trace(rng, atoms);
  const auto keep_inside = [&](std::vector<Element>& d) {
    std::erase_if(d, [&](const Element& x) { return !t.in_carrier(x); });
    Element j(atoms);
    for (const auto& x : d) j |= x;
    if (!j.all()) d.push_back(~j);
  };
  for (auto& d : t.designated_predense) keep_inside(d);
  t.designated_antichains.clear();
  return t;
}

AuditResult sg_audit(const ModelTrace& t) {
  validate_trace(t);
  AuditResult r;
  r.audit = "sg";
  prefixed(disjointification_audit(t), "disjointification: ", r);
  std::size_t restrictions = 0;
  CheckBuilder restricted("restriction at every nonzero element of M");
  for (const auto& b : t.carrier) {
    if (b.none()) continue;
    const auto sub = restriction_audit(t, b);
    ++restrictions;
    restricted.expect_lazy(sub.passed(), [&] { return b.to_string() + ": " + sub.summary(); });
    if (sub.facts.at("closure-gap") != "none") r.facts["restriction-gap"] = b.to_string();
  }
  r.checks.push_back(restricted.done());
  prefixed(semigeneric_sup_audit(t), "semigeneric: ", r);
  r.facts["restrictions"] = std::to_string(restrictions);
  r.facts["sg"] = sg_value(t).to_string();
  return r;
}

}  // namespace forcing
