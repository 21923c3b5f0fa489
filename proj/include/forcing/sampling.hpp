#pragma once

#include <random>
#include <vector>

#include "forcing/finite_cba.hpp"

namespace forcing {

Element random_element(std::mt19937_64& rng, std::size_t atoms);

// Elements to quantify over: everything when exhaustive, else a seeded sample
// that always includes 0, 1 and the atoms.
std::vector<Element> element_domain(const FiniteCBA& a, bool exhaustive, std::mt19937_64& rng, std::size_t samples);

}  // namespace forcing
