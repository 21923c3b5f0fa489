#include "forcing/sampling.hpp"

namespace forcing {

Element random_element(std::mt19937_64& rng, std::size_t atoms) {
  Element e(atoms);
  for (std::size_t t = 0; t < atoms; ++t) {
    if (rng() & 1U) e.set(t);
  }
  return e;
}

std::vector<Element> element_domain(const FiniteCBA& a, bool exhaustive, std::mt19937_64& rng, std::size_t samples) {
  if (exhaustive) return a.elements();
  std::vector<Element> out{a.zero(), a.one()};
  for (std::size_t t = 0; t < a.atom_count(); ++t) out.push_back(a.atom(t));
  for (std::size_t k = 0; k < samples; ++k) out.push_back(random_element(rng, a.atom_count()));
  return out;
}

}  // namespace forcing
