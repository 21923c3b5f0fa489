#pragma once

#include <vector>

#include "forcing/finite_cba.hpp"

namespace forcing {

enum class FilterKind { Filter, Ideal };

struct FilterSpec {
  std::vector<Element> generators;
  FilterKind kind = FilterKind::Filter;
};

// In a finite algebra every ultrafilter is principal at an atom.
class Ultrafilter {
 public:
  Ultrafilter(const FiniteCBA& algebra, std::size_t atom);
  std::size_t atom() const { return atom_; }
  std::size_t atom_count() const { return atoms_; }
  bool contains(const Element& b) const { return b.test(atom_); }
  bool operator==(const Ultrafilter&) const = default;

 private:
  std::size_t atoms_;
  std::size_t atom_;
};

std::vector<Ultrafilter> ultrafilters(const FiniteCBA& algebra);

// The Stone set N_b, as the set of atoms (= ultrafilters) containing b.
inline Element stone_set(const Element& b) { return b; }

// The generated filter is principal; returns its least element.
Element filter_bound(const FiniteCBA& algebra, const FilterSpec& spec);
bool filter_contains(const FiniteCBA& algebra, const FilterSpec& spec, const Element& x);

struct FilterQuotient {
  Relativization algebra;  // B/I, presented as B restricted below the filter bound
  Element class_of(const Element& x) const { return algebra.lower(x); }
};

// Throws ImproperFilter when the filter contains 0.
FilterQuotient quotient_by_filter(const FiniteCBA& algebra, const FilterSpec& spec);

}  // namespace forcing
