#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "forcing/errors.hpp"
#include "forcing/gallery.hpp"

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

// Brute-force evaluation over all assignments of the listed generators.
bool equal_on(const FreeElement& a, const FreeElement& b, std::size_t xs, std::size_t ys) {
  const std::size_t n = xs + ys;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto val = [&](const Generator& g) {
      const std::size_t bit = g.family == "x" ? static_cast<std::size_t>(g.index) : xs + static_cast<std::size_t>(g.index);
      return bit < n && ((mask >> bit) & 1U);
    };
    if (a.evaluate(val) != b.evaluate(val)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("the F0 tower") {
  const auto t = build_F0(2);
  CHECK(t.audit.passed());
  CHECK(t.system.retract(0, 1, gallery_x(0) & gallery_y(0)) == gallery_x(0));
  CHECK(t.system.retract(0, 1, gallery_y(0)).is_one());
  CHECK(build_F0(16).audit.passed());
  CHECK(kind_of([] { build_F0(1); }) == ErrorKind::ValidationError);
}

TEST_CASE("xlemma1") {
  const auto r = xlemma1_audit(5);
  CHECK_MESSAGE(r.passed(), r.summary());
  CHECK(r.facts.at("coordinates") == "0..5");
  CHECK(kind_of([] { xlemma1_audit(2); }) == ErrorKind::ValidationError);

  // t(3) = y0 & y1 & y2, checked on all assignments.
  const FreeElement t3 = FreeElement::parse(r.facts.at("t(3)"));
  CHECK(equal_on(t3, gallery_y(0) & gallery_y(1) & gallery_y(2), 0, 3));

  // Coordinate 0 of t_1 is the projection of ~y0: 1.
  const auto tower = build_F0(3);
  CHECK(tower.system.retract(0, 1, ~gallery_y(0)).is_one());
  // t_1 and t_2 at coordinate 2.
  CHECK((~gallery_y(0) & (gallery_y(0) & ~gallery_y(1))).is_zero());
}

TEST_CASE("xwedge") {
  const auto r = xwedge_audit(5);
  CHECK_MESSAGE(r.passed(), r.summary());
  CHECK(r.facts.at("x0") == "FailsAt(2)");
  const FreeElement m3 = FreeElement::parse(r.facts.at("f(3)&g(3)"));
  CHECK(equal_on(m3, gallery_x(0) & gallery_x(1) & gallery_x(2), 3, 3));
  CHECK(kind_of([] { xwedge_audit(1); }) == ErrorKind::ValidationError);
}

TEST_CASE("both audits at depth 16 within budget") {
  const auto start = std::chrono::steady_clock::now();
  const auto a = xlemma1_audit(16);
  const auto b = xwedge_audit(16);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK_MESSAGE(a.passed(), a.summary());
  CHECK_MESSAGE(b.passed(), b.summary());
  CHECK(a.facts.at("certified-depth") == "16");
  CHECK(secs < 5.0);
}
