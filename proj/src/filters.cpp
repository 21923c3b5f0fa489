#include "forcing/filters.hpp"

#include "forcing/errors.hpp"

namespace forcing {

Ultrafilter::Ultrafilter(const FiniteCBA& algebra, std::size_t atom) : atoms_(algebra.atom_count()), atom_(atom) {
  if (atom >= atoms_) fail(ErrorKind::ValidationError, "no atom " + std::to_string(atom));
}

std::vector<Ultrafilter> ultrafilters(const FiniteCBA& algebra) {
  std::vector<Ultrafilter> out;
  for (std::size_t a = 0; a < algebra.atom_count(); ++a) out.emplace_back(algebra, a);
  return out;
}

Element filter_bound(const FiniteCBA& algebra, const FilterSpec& spec) {
  for (const auto& g : spec.generators) {
    if (!algebra.contains(g)) fail(ErrorKind::MixedAlgebras, "generator " + g.to_string() + " is from another algebra");
  }
  if (spec.kind == FilterKind::Filter) return algebra.meet(spec.generators);
  return ~algebra.join(spec.generators);
}

bool filter_contains(const FiniteCBA& algebra, const FilterSpec& spec, const Element& x) {
  return filter_bound(algebra, spec).leq(x);
}

FilterQuotient quotient_by_filter(const FiniteCBA& algebra, const FilterSpec& spec) {
  const Element bound = filter_bound(algebra, spec);
  if (bound.none()) {
    fail(ErrorKind::ImproperFilter, spec.kind == FilterKind::Filter ? "generators meet to 0" : "generators join to 1");
  }
  return FilterQuotient{Relativization(algebra, bound)};
}

}  // namespace forcing
