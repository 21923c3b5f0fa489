#include "forcing/gallery.hpp"

#include <random>
#include <string>
#include <vector>

#include "forcing/errors.hpp"

namespace forcing {

namespace {

constexpr std::size_t kSampledX = 3;

Generator y_gen(std::size_t k) { return Generator::of("y", static_cast<std::int64_t>(k)); }

FreeTower f0_tower() {
  return FreeTower(
      [](std::size_t n, const Generator& g) {
        return g.family == "x" || (g.family == "y" && g.index >= 0 && static_cast<std::size_t>(g.index) < n);
      },
      [](std::size_t n) {
        std::vector<Generator> gens;
        for (std::size_t k = 0; k < kSampledX; ++k) gens.push_back(Generator::of("x", static_cast<std::int64_t>(k)));
        for (std::size_t k = 0; k < n; ++k) gens.push_back(y_gen(k));
        return gens;
      });
}

void require_depth(std::size_t depth, std::size_t least) {
  if (depth < least) {
    fail(ErrorKind::ValidationError, "depth " + std::to_string(depth) + " is below " + std::to_string(least));
  }
}

std::string coords(std::size_t depth) { return "0.." + std::to_string(depth); }

// a_0 = 1, a_n = y_{n-1}.
FreeElement ex1_a(std::size_t n) { return n == 0 ? FreeElement::one() : gallery_y(n - 1); }

// a_n = x_0 & ... & x_{n-1}.
FreeElement wedge_a(std::size_t n) {
  FreeElement a = FreeElement::one();
  for (std::size_t k = 0; k < n; ++k) a &= gallery_x(k);
  return a;
}

bool validates(const FreeTower& s, const Thread<FreeElement>& f, std::size_t depth, std::string& why) {
  try {
    thread_validate(s, f, depth);
    return true;
  } catch (const Error& e) {
    why = e.what();
    return false;
  }
}

// A nonzero h must leave the chain at some finite stage; a zero verdict on a
// nonzero h would mean the chain has a nonzero lower bound.
void escape_check(CheckBuilder& c, const FreeElement& h, const std::function<FreeElement(std::size_t)>& rule) {
  const ChainVerdict v = chain_vanishing(h, rule);
  c.expect_lazy(h.is_zero() == (v.kind == ChainVerdict::Kind::LowerBoundZero),
                [&] { return h.to_string() + ": " + v.to_string(); });
}

}  // namespace

FreeElement gallery_x(std::size_t k) { return FreeElement::generator(Generator::of("x", static_cast<std::int64_t>(k))); }
FreeElement gallery_y(std::size_t k) { return FreeElement::generator(y_gen(k)); }

GalleryTower build_F0(std::size_t depth) {
  require_depth(depth, 2);
  GalleryTower t{f0_tower(), depth, {}};
  t.audit = system_audit(t.system, depth);
  t.audit.audit = "F0";
  CheckBuilder fresh("pi(y_n) = pi(~y_n) = 1 one stage down");
  for (std::size_t n = 0; n < depth; ++n) {
    const FreeElement y = gallery_y(n);
    fresh.expect_lazy(t.system.contains(n + 1, y) && !t.system.contains(n, y), [&] { return y.to_string(); });
    fresh.expect_lazy(t.system.retract(n, n + 1, y).is_one() && t.system.retract(n, n + 1, ~y).is_one(),
                      [&] { return y.to_string(); });
  }
  t.audit.checks.push_back(fresh.done());
  t.audit.facts["depth"] = std::to_string(depth);
  return t;
}

AuditResult xlemma1_audit(std::size_t depth) {
  require_depth(depth, 3);
  const GalleryTower tower = build_F0(depth);
  const FreeTower& s = tower.system;
  AuditResult r;
  r.audit = "xlemma1";
  for (auto c : tower.audit.checks) {
    c.law = "F0: " + c.law;
    r.checks.push_back(std::move(c));
  }

  // tm[m] for 1 <= m <= depth + 1; tm[0] = 0 is kept only for indexing.
  std::vector<Thread<FreeElement>> tm(depth + 2);
  for (std::size_t m = 0; m <= depth + 1; ++m) {
    FreeElement seed = ~ex1_a(m);
    for (std::size_t l = 0; l < m; ++l) seed &= ex1_a(l);
    tm[m] = constant_thread<FreeElement>(s, m, seed);
    tm[m].label = "t" + std::to_string(m);
  }

  CheckBuilder threads("each t_m is a thread");
  CheckBuilder support("t_m has support m");
  for (std::size_t m = 1; m <= depth + 1; ++m) {
    std::string why;
    threads.expect_lazy(validates(s, tm[m], depth, why), [&] { return why; });
    support.expect(tm[m].constant && tm[m].constant->support == m, tm[m].label);
  }
  r.checks.push_back(threads.done());
  r.checks.push_back(support.done());

  CheckBuilder disjoint("t_n & t_m = 0 from coordinate max(n, m)");
  for (std::size_t n = 1; n <= depth; ++n) {
    for (std::size_t m = n + 1; m <= depth; ++m) {
      for (std::size_t k = m; k <= depth; ++k) {
        disjoint.expect_lazy((tm[n].at(k) & tm[m].at(k)).is_zero(),
                             [&] { return "(" + std::to_string(n) + "," + std::to_string(m) + ") at " + std::to_string(k); });
      }
    }
  }
  r.checks.push_back(disjoint.done());

  CheckBuilder covers("join of t_m(n) over 0 < m <= n + 1 is 1");
  for (std::size_t n = 0; n <= depth; ++n) {
    FreeElement j = FreeElement::zero();
    for (std::size_t m = 1; m <= n + 1; ++m) j |= tm[m].at(n);
    covers.expect_lazy(j.is_one(), [&] { return "coordinate " + std::to_string(n) + ": " + j.to_string(); });
  }
  r.checks.push_back(covers.done());

  const Thread<FreeElement> t{[](std::size_t n) {
                                FreeElement out = FreeElement::one();
                                for (std::size_t m = 0; m <= n; ++m) out &= ex1_a(m);
                                return out;
                              },
                              std::nullopt, "t"};
  CheckBuilder t_thread("t is a nonzero thread");
  std::string why;
  t_thread.expect_lazy(validates(s, t, depth, why), [&] { return why; });
  for (std::size_t n = 0; n <= depth; ++n) t_thread.expect(!t.at(n).is_zero(), "coordinate " + std::to_string(n));
  r.checks.push_back(t_thread.done());

  CheckBuilder t_disjoint("t & t_m = 0 from coordinate m");
  for (std::size_t m = 1; m <= depth; ++m) {
    for (std::size_t k = m; k <= depth; ++k) {
      t_disjoint.expect_lazy((t.at(k) & tm[m].at(k)).is_zero(),
                             [&] { return std::to_string(m) + " at " + std::to_string(k); });
    }
  }
  r.checks.push_back(t_disjoint.done());

  // Support escape: no nonzero constant of support <= depth stays below t.
  const LowerBound<FreeElement> lb = direct_limit_lower_bound<FreeElement>(s, t, depth);
  CheckBuilder gap("no nonzero constant thread lies below t");
  gap.expect(lb.gap, "lower bound reaches a nonzero coordinate");
  std::mt19937_64 rng(depth);
  for (std::size_t k = 0; k <= depth; ++k) {
    escape_check(gap, t.at(k), t.at);
    for (const auto& h : s.sample(k, rng, 8)) {
      if (!h.leq(t.at(k))) continue;
      escape_check(gap, h, t.at);
    }
  }
  r.checks.push_back(gap.done());

  CheckBuilder first_escape("t(s) leaves t at coordinate s + 1");
  for (std::size_t k = 0; k <= depth; ++k) {
    const ChainVerdict v = chain_vanishing(t.at(k), t.at);
    first_escape.expect(v == ChainVerdict{ChainVerdict::Kind::FailsAt, k + 1}, v.to_string());
  }
  r.checks.push_back(first_escape.done());

  // Below their supports the t_m share a projection, so the stage-antichain
  // precondition of the sup audit fails there.
  CheckBuilder precondition("t_1..t_depth are not an antichain at stages below depth - 1");
  std::vector<Thread<FreeElement>> family(tm.begin() + 1, tm.begin() + static_cast<std::ptrdiff_t>(depth) + 1);
  for (std::size_t stage = 0; stage + 1 < depth; ++stage) {
    bool refused = false;
    try {
      antichain_sup_audit<FreeElement>(s, family, stage, depth);
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::NotAntichainAtStage;
    }
    precondition.expect(refused, "stage " + std::to_string(stage));
  }
  r.checks.push_back(precondition.done());

  r.facts["certified-depth"] = std::to_string(depth);
  r.facts["coordinates"] = coords(depth);
  r.facts["indexing"] = "t_m for 1 <= m <= " + std::to_string(depth + 1) + ", support m; t_0 = 0 omitted";
  r.facts["t(3)"] = t.at(3).to_string();
  r.facts["sup-in-completion"] = "<= ~t < 1";
  return r;
}

AuditResult xwedge_audit(std::size_t depth) {
  require_depth(depth, 3);
  const GalleryTower tower = build_F0(depth);
  const FreeTower& s = tower.system;
  AuditResult r;
  r.audit = "xwedge";
  for (auto c : tower.audit.checks) {
    c.law = "F0: " + c.law;
    r.checks.push_back(std::move(c));
  }

  const auto d = [](std::size_t n) { return gallery_y(n - 1); };
  const Thread<FreeElement> f{[d](std::size_t n) {
                                FreeElement out = FreeElement::one();
                                for (std::size_t k = 1; k <= n; ++k) out &= d(k) | wedge_a(k);
                                return out;
                              },
                              std::nullopt, "f"};
  const Thread<FreeElement> g{[d](std::size_t n) {
                                FreeElement out = FreeElement::one();
                                for (std::size_t k = 1; k <= n; ++k) out &= ~d(k) | wedge_a(k);
                                return out;
                              },
                              std::nullopt, "g"};

  CheckBuilder threads("f and g are threads");
  std::string why;
  threads.expect_lazy(validates(s, f, depth, why), [&] { return why; });
  threads.expect_lazy(validates(s, g, depth, why), [&] { return why; });
  r.checks.push_back(threads.done());

  CheckBuilder meet("f(n) & g(n) = a_n, nonzero");
  CheckBuilder down("pi_0n(f(n) & g(n)) = a_n");
  for (std::size_t n = 0; n <= depth; ++n) {
    const FreeElement m = f.at(n) & g.at(n);
    meet.expect_lazy(m == wedge_a(n) && !m.is_zero(), [&] { return std::to_string(n) + ": " + m.to_string(); });
    down.expect_lazy(s.retract(0, n, m) == wedge_a(n), [&] { return std::to_string(n); });
  }
  r.checks.push_back(meet.done());
  r.checks.push_back(down.done());

  // The coordinatewise meet n -> a_n is not itself a thread.
  CheckBuilder not_thread("the coordinatewise meet is not a thread");
  const Thread<FreeElement> pointwise{[](std::size_t n) { return wedge_a(n); }, std::nullopt, "a"};
  not_thread.expect(!validates(s, pointwise, depth, why), "coherent to depth");
  r.checks.push_back(not_thread.done());

  // A common lower bound h has h(0) <= a_n for every n, so h(0) = 0.
  CheckBuilder escape("every nonzero h(0) leaves the chain a_n");
  const std::function<FreeElement(std::size_t)> chain = wedge_a;
  std::mt19937_64 rng(depth);
  for (const auto& h : s.sample(0, rng, 32)) escape_check(escape, h, chain);
  for (std::size_t n = 0; n <= depth; ++n) escape_check(escape, wedge_a(n), chain);
  r.checks.push_back(escape.done());

  CheckBuilder named("x0 fails at 2; 0 is a vacuous lower bound");
  const ChainVerdict vx = chain_vanishing(gallery_x(0), chain);
  named.expect(vx == ChainVerdict{ChainVerdict::Kind::FailsAt, 2}, vx.to_string());
  const ChainVerdict vz = chain_vanishing(FreeElement::zero(), chain);
  named.expect(vz.kind == ChainVerdict::Kind::LowerBoundZero, vz.to_string());
  r.checks.push_back(named.done());

  r.facts["certified-depth"] = std::to_string(depth);
  r.facts["coordinates"] = coords(depth);
  r.facts["f(3)&g(3)"] = (f.at(3) & g.at(3)).to_string();
  r.facts["x0"] = vx.to_string();
  return r;
}

}  // namespace forcing
